#pragma once

#include "hbar/black_hole.hpp"
#include "hbar/complex_gamma.hpp"
#include "hbar/config.hpp"
#include "hbar/constants.hpp"
#include "hbar/entropy.hpp"
#include "hbar/excitation.hpp"
#include "hbar/format.hpp"
#include "hbar/geometry.hpp"
#include "hbar/master_equation.hpp"
#include "hbar/ode.hpp"
#include "hbar/quadrature.hpp"
#include "hbar/runner.hpp"
#include "hbar/trajectory.hpp"
#include "hbar/units.hpp"
