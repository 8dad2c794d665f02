// SPDX-License-Identifier: Apache-2.0
//
// nlhs.hpp - umbrella header.

#pragma once

#include "nlhs/series.hpp"
#include "nlhs/signal_model.hpp"
#include "nlhs/preprocess.hpp"
#include "nlhs/spectral.hpp"
#include "nlhs/estimator.hpp"
#include "nlhs/baselines.hpp"
#include "nlhs/metrics.hpp"
#include "nlhs/synth.hpp"
#include "nlhs/pipeline.hpp"
#include "nlhs/io.hpp"
#include "nlhs/corpus.hpp"
