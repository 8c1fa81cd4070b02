#pragma once

#include "hydrowave/errors.hpp"
#include "hydrowave/spectral.hpp"
#include "hydrowave/domain.hpp"
#include "hydrowave/curve.hpp"
#include "hydrowave/birkhoff_rott.hpp"
#include "hydrowave/residual.hpp"
#include "hydrowave/linear_analysis.hpp"
#include "hydrowave/wilton.hpp"
#include "hydrowave/broyden.hpp"
#include "hydrowave/continuation.hpp"
#include "hydrowave/convergence.hpp"
#include "hydrowave/io.hpp"
#include "hydrowave/commands.hpp"
