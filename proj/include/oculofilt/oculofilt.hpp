// Copyright 2026 The oculofilt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef OCULOFILT_OCULOFILT_HPP
#define OCULOFILT_OCULOFILT_HPP

#include "oculofilt/bands.hpp"
#include "oculofilt/butterworth.hpp"
#include "oculofilt/csv.hpp"
#include "oculofilt/error.hpp"
#include "oculofilt/fft.hpp"
#include "oculofilt/filtfilt.hpp"
#include "oculofilt/heuristic.hpp"
#include "oculofilt/kinematics.hpp"
#include "oculofilt/mainseq.hpp"
#include "oculofilt/pipeline.hpp"
#include "oculofilt/recording.hpp"
#include "oculofilt/saccades.hpp"
#include "oculofilt/spectral.hpp"
#include "oculofilt/synth.hpp"

#endif  // OCULOFILT_OCULOFILT_HPP
