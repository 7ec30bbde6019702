// Copyright 2026 The Authors.
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

#ifndef MACROFACET_JSON_IO_H_
#define MACROFACET_JSON_IO_H_

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "macrofacet/chronicle.h"
#include "macrofacet/matroid.h"
#include "macrofacet/selection.h"
#include "macrofacet/simulation.h"
#include "macrofacet/utility.h"

namespace macrofacet {

using Json = nlohmann::json;

// Schema errors are ValidationError(SCHEMA_ERROR) whose witness is the JSON
// path of the offending value, e.g. "$.facets[2].id".

Chronicle ParseChronicle(const Json& j);
Json ToJson(const Chronicle& chronicle);

MacroFacetSet ParseMacroFacetSet(const Json& j);
Json ToJson(const MacroFacetSet& mset);

// {"constraints":[{"name"?,"members":[..],"quota":n}], "exclusive":[[..]]}.
// Each exclusive list becomes a quota-1 constraint named "X<k>".
std::vector<QuotaConstraint> ParseConstraints(const Json& j);
Json ToJson(const QuotaTree& tree);

// Builds a utility over the macro-facets of `mset`. Facet-level utilities
// ("over":"facets", the default for "modular") are lifted through expansion.
std::shared_ptr<const UtilityFunction> ParseUtility(
    const Json& j, std::shared_ptr<const MacroFacetSet> mset,
    bool replay_tolerant = false);

Json ToJson(const SelectionResult& result, const QuotaTree& tree,
            bool include_trace);
Json ToJson(const AxiomVerdict& verdict, const QuotaTree& tree);
Json ToJson(const SubmodularityVerdict& verdict, const UtilityFunction& u);
Json ToJson(const ExperimentConfig& config);
// Wall-clock is written only when `include_timing` is set, so that reports
// stay byte-identical across runs by default.
Json ToJson(const ExperimentReport& report, bool include_timing);
Json ToJson(const Instance& instance);

// Pretty-printed, keys sorted, trailing newline.
std::string Dump(const Json& j);

Json ReadJsonFile(const std::filesystem::path& path);
// Writes via a temporary sibling file and rename.
void WriteFileAtomic(const std::filesystem::path& path,
                     const std::string& content);

}  // namespace macrofacet

#endif  // MACROFACET_JSON_IO_H_
