#pragma once

// JSON encodings of the core types. Readers throw SchemaError with a JSON
// pointer to the offending field; invariant violations found after parsing
// keep their own error types.
//
//   Alphabet       {"name": "u1", "symbols": ["1", "2", "3"]}
//   JointPMF       {"axes": [Alphabet...], "mass": nested arrays in axis order}
//   Kernel         {"from": [Alphabet...], "to": [Alphabet...], "rows": [[...], ...]}
//   CharGraph      {"name": "u1", "vertices": [...], "edges": [[a, b], ...]}
//   Coloring       {"vertex": "color", ...}
//   FunctionTable  {"axes": [Alphabet...], "values": nested arrays of labels}
//   Distortion     {"labels": [...], "matrix": [[...], ...]}
//
// Probabilities may be numbers or fraction strings such as "1/6".

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "fcmac/channels.hpp"
#include "fcmac/feasibility.hpp"
#include "fcmac/graph.hpp"
#include "fcmac/prob.hpp"
#include "fcmac/schemes.hpp"

namespace fcmac {

using Json = nlohmann::ordered_json;

// Parses a file; syntax errors become SchemaError at path "".
Json read_json_file(const std::filesystem::path& path);

Alphabet alphabet_from_json(const Json& j, const std::string& path = "");
Json to_json(const Alphabet& a);

JointPMF pmf_from_json(const Json& j, const std::string& path = "");
Json to_json(const JointPMF& p);

Kernel kernel_from_json(const Json& j, const std::string& path = "");
Json to_json(const Kernel& k);

DiscreteMAC mac_from_json(const Json& j, const std::string& path = "");

CharGraph graph_from_json(const Json& j, const std::string& path = "");
Json to_json(const CharGraph& g);

Coloring coloring_from_json(const Json& j, const CharGraph& g, const std::string& path = "");
Json coloring_to_json(const CharGraph& g, const Coloring& c);

FunctionTable function_from_json(const Json& j, const std::string& path = "");
Json to_json(const FunctionTable& f);

DistortionTable distortion_from_json(const Json& j, const std::string& path = "");
Json to_json(const DistortionTable& d);

SystemSpec spec_from_json(const Json& j, const std::string& path = "");
Json to_json(const SystemSpec& s);

Json to_json(const FeasibilityReport& r);

// {"experiment": id, "rho": .., "power": .., "sigma2": .., "input_rho": ..,
//  "target_d": .., "delta": .., "alpha": .., "cells": .., "samples": .., "seed": ..}
SchemeConfig config_from_json(const Json& j, const std::string& path = "");
Json to_json(const SchemeConfig& c);

}  // namespace fcmac
