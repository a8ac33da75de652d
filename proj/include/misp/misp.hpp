#pragma once

// Hybrid mixed (MiSP) finite elements for clamped Reissner-Mindlin plates:
// MiSP3 triangles and MiSP4 quadrilaterals with MITC-style shear reduction
// and element-level static condensation, plus the convergence/verification
// harness around them.

#include "misp/assembly.hpp"
#include "misp/element_system.hpp"
#include "misp/error_norms.hpp"
#include "misp/geometry.hpp"
#include "misp/helmholtz.hpp"
#include "misp/infsup.hpp"
#include "misp/manufactured.hpp"
#include "misp/material.hpp"
#include "misp/mesh.hpp"
#include "misp/moment_basis.hpp"
#include "misp/quadrature.hpp"
#include "misp/reduction.hpp"
#include "misp/rh_checks.hpp"
#include "misp/solve.hpp"
#include "misp/study.hpp"
