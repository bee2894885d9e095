#pragma once

#include "leray/lattice.hpp"
#include "leray/field.hpp"
#include "leray/model.hpp"
#include "leray/spectral.hpp"
#include "leray/transform.hpp"
#include "leray/nonlinear.hpp"
#include "leray/noise.hpp"
#include "leray/integrator.hpp"
#include "leray/ensemble.hpp"
#include "leray/diagnostics.hpp"
#include "leray/invariants.hpp"
#include "leray/config.hpp"
#include "leray/snapshot.hpp"
#include "leray/output.hpp"
