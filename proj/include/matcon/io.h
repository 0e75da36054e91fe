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

#ifndef MATCON_IO_H_
#define MATCON_IO_H_

#include <string>
#include <variant>

#include "json.hpp"
#include "matcon/model.h"

namespace matcon {

using Json = nlohmann::ordered_json;

MatroidPtr ParseMatroid(const Json& node);
Json MatroidToJson(const Matroid& matroid);

// Parsed, padded and validated. Throws ValidationError naming the field.
OlcpmInstance ParseOlcpm(const Json& node);
UpmInstance ParseUpm(const Json& node);

using Instance = std::variant<OlcpmInstance, UpmInstance>;

Instance ParseInstanceText(const std::string& text);
Instance LoadInstance(const std::string& path);

Json ToJson(const OlcpmInstance& instance);
Json ToJson(const UpmInstance& instance);

// Compact JSON; floating-point numbers printed with 17 significant digits.
std::string DumpJson(const Json& value);

// "%.17g".
std::string FormatDouble(double value);

}  // namespace matcon

#endif  // MATCON_IO_H_
