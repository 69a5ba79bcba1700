// Copyright 2026 The incanvas Authors.
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
#pragma once

// Everything: data engine, chart specs, generation, canvas model, server.

#include "incanvas/canvas/document.hpp"
#include "incanvas/chart/compile.hpp"
#include "incanvas/chart/lower.hpp"
#include "incanvas/chart/repair.hpp"
#include "incanvas/chart/spec.hpp"
#include "incanvas/chart/validate.hpp"
#include "incanvas/common/error.hpp"
#include "incanvas/common/ids.hpp"
#include "incanvas/common/text.hpp"
#include "incanvas/data/ingest.hpp"
#include "incanvas/data/profile.hpp"
#include "incanvas/data/query.hpp"
#include "incanvas/data/stats.hpp"
#include "incanvas/data/value.hpp"
#include "incanvas/gen/generator.hpp"
#include "incanvas/gen/http_provider.hpp"
#include "incanvas/gen/parse.hpp"
#include "incanvas/gen/prompt.hpp"
#include "incanvas/gen/provider.hpp"
#include "incanvas/gen/rules.hpp"
#include "incanvas/gen/suggest.hpp"
#include "incanvas/server/config.hpp"
#include "incanvas/server/http.hpp"
#include "incanvas/server/jobs.hpp"
#include "incanvas/server/service.hpp"
#include "incanvas/server/store.hpp"
