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

#include "matcon/io.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "matcon/errors.h"

namespace matcon {
namespace {

[[noreturn]] void Fail(const std::string& where, const std::string& what) {
  throw ValidationError(where + ": " + what);
}

const Json& Field(const Json& node, const std::string& key,
                  const std::string& where) {
  if (!node.is_object()) Fail(where, "expected an object");
  auto it = node.find(key);
  if (it == node.end()) Fail(where, "missing field \"" + key + "\"");
  return *it;
}

int ReadInt(const Json& node, const std::string& where) {
  if (!node.is_number_integer()) Fail(where, "expected an integer");
  return node.get<int>();
}

std::vector<int> ReadIntList(const Json& node, const std::string& where) {
  if (!node.is_array()) Fail(where, "expected an array");
  std::vector<int> out;
  for (std::size_t j = 0; j < node.size(); ++j) {
    out.push_back(ReadInt(node[j], where + "[" + std::to_string(j) + "]"));
  }
  return out;
}

Rational ReadRational(const Json& node, const std::string& where) {
  try {
    if (node.is_string()) return ParseRational(node.get<std::string>());
    if (node.is_number_integer()) return ParseRational(node.dump());
  } catch (const ValidationError& e) {
    Fail(where, e.what());
  }
  Fail(where, "expected a rational string such as \"3/4\"");
}

template <typename Build>
MatroidPtr Construct(const std::string& where, Build&& build) {
  try {
    return build();
  } catch (const std::invalid_argument& e) {
    Fail(where, e.what());
  }
}

MatroidPtr ParseMatroidAt(const Json& node, const std::string& where) {
  const Json& type = Field(node, "type", where);
  if (!type.is_string()) Fail(where + ".type", "expected a string");
  const std::string kind = type.get<std::string>();
  if (kind == "uniform") {
    const int n = ReadInt(Field(node, "n", where), where + ".n");
    const int r = ReadInt(Field(node, "rank", where), where + ".rank");
    return Construct(where, [&] { return std::make_shared<UniformMatroid>(n, r); });
  }
  if (kind == "partition") {
    const Json& blocks = Field(node, "blocks", where);
    if (!blocks.is_array()) Fail(where + ".blocks", "expected an array");
    std::vector<std::vector<int>> sets;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      sets.push_back(ReadIntList(blocks[b], where + ".blocks[" +
                                                std::to_string(b) + "]"));
    }
    auto caps = ReadIntList(Field(node, "capacities", where),
                            where + ".capacities");
    return Construct(where, [&] {
      return std::make_shared<PartitionMatroid>(std::move(sets),
                                                std::move(caps));
    });
  }
  if (kind == "laminar") {
    const int n = ReadInt(Field(node, "n", where), where + ".n");
    const Json& family = Field(node, "sets", where);
    if (!family.is_array()) Fail(where + ".sets", "expected an array");
    std::vector<std::vector<int>> sets;
    for (std::size_t b = 0; b < family.size(); ++b) {
      sets.push_back(
          ReadIntList(family[b], where + ".sets[" + std::to_string(b) + "]"));
    }
    auto caps = ReadIntList(Field(node, "capacities", where),
                            where + ".capacities");
    return Construct(where, [&] {
      return std::make_shared<LaminarMatroid>(n, std::move(sets),
                                              std::move(caps));
    });
  }
  if (kind == "graphic") {
    const int v = ReadInt(Field(node, "vertices", where), where + ".vertices");
    const Json& list = Field(node, "edges", where);
    if (!list.is_array()) Fail(where + ".edges", "expected an array");
    std::vector<std::pair<int, int>> edges;
    for (std::size_t j = 0; j < list.size(); ++j) {
      const std::string at = where + ".edges[" + std::to_string(j) + "]";
      auto ends = ReadIntList(list[j], at);
      if (ends.size() != 2) Fail(at, "an edge needs two endpoints");
      edges.emplace_back(ends[0], ends[1]);
    }
    return Construct(where, [&] {
      return std::make_shared<GraphicMatroid>(v, std::move(edges));
    });
  }
  if (kind == "parallel") {
    MatroidPtr base = ParseMatroidAt(Field(node, "base", where), where + ".base");
    auto map = ReadIntList(Field(node, "map", where), where + ".map");
    return Construct(where, [&] {
      return std::make_shared<ParallelExtension>(base, std::move(map));
    });
  }
  Fail(where + ".type", "unknown matroid type \"" + kind + "\"");
}

void RequireKind(const Json& node, const std::string& expected) {
  const Json& kind = Field(node, "kind", "instance");
  if (!kind.is_string() || kind.get<std::string>() != expected) {
    Fail("instance.kind", "expected \"" + expected + "\"");
  }
}

void ThrowViolations(const std::vector<std::string>& problems) {
  if (problems.empty()) return;
  std::string msg = "invalid instance:";
  for (const auto& p : problems) msg += "\n  " + p;
  throw ValidationError(msg);
}

void DumpTo(const Json& value, std::string& out) {
  switch (value.type()) {
    case Json::value_t::object: {
      out += '{';
      bool first = true;
      for (auto it = value.begin(); it != value.end(); ++it) {
        if (!first) out += ',';
        first = false;
        out += Json(it.key()).dump();
        out += ':';
        DumpTo(it.value(), out);
      }
      out += '}';
      break;
    }
    case Json::value_t::array: {
      out += '[';
      for (std::size_t j = 0; j < value.size(); ++j) {
        if (j > 0) out += ',';
        DumpTo(value[j], out);
      }
      out += ']';
      break;
    }
    case Json::value_t::number_float:
      out += FormatDouble(value.get<double>());
      break;
    default:
      out += value.dump();
  }
}

}  // namespace

MatroidPtr ParseMatroid(const Json& node) {
  return ParseMatroidAt(node, "matroid");
}

Json MatroidToJson(const Matroid& matroid) {
  Json out;
  switch (matroid.kind()) {
    case Matroid::Kind::kUniform: {
      const auto& u = static_cast<const UniformMatroid&>(matroid);
      out["type"] = "uniform";
      out["n"] = u.size();
      out["rank"] = u.rank();
      break;
    }
    case Matroid::Kind::kPartition: {
      const auto& p = static_cast<const PartitionMatroid&>(matroid);
      out["type"] = "partition";
      out["blocks"] = p.blocks();
      out["capacities"] = p.capacities();
      break;
    }
    case Matroid::Kind::kLaminar: {
      const auto& l = static_cast<const LaminarMatroid&>(matroid);
      out["type"] = "laminar";
      out["n"] = l.size();
      out["sets"] = l.sets();
      out["capacities"] = l.capacities();
      break;
    }
    case Matroid::Kind::kGraphic: {
      const auto& g = static_cast<const GraphicMatroid&>(matroid);
      out["type"] = "graphic";
      out["vertices"] = g.vertices();
      Json edges = Json::array();
      for (const auto& [u, v] : g.edges()) edges.push_back({u, v});
      out["edges"] = edges;
      break;
    }
    case Matroid::Kind::kParallel: {
      const auto& x = static_cast<const ParallelExtension&>(matroid);
      out["type"] = "parallel";
      out["base"] = MatroidToJson(*x.base());
      out["map"] = x.image();
      break;
    }
  }
  return out;
}

OlcpmInstance ParseOlcpm(const Json& node) {
  RequireKind(node, "olcpm");
  OlcpmInstance inst;
  inst.matroid = ParseMatroid(Field(node, "matroid", "instance"));
  const Json& elements = Field(node, "elements", "instance");
  if (!elements.is_array()) Fail("elements", "expected an array");
  for (std::size_t i = 0; i < elements.size(); ++i) {
    const std::string at = "elements[" + std::to_string(i) + "]";
    OlcpmElement e;
    e.cost = ReadRational(Field(elements[i], "cost", at), at + ".cost");
    const Json& outcomes = Field(elements[i], "outcomes", at);
    if (!outcomes.is_array() || outcomes.empty()) {
      Fail(at + ".outcomes", "expected a non-empty array");
    }
    for (std::size_t k = 0; k < outcomes.size(); ++k) {
      const std::string ok = at + ".outcomes[" + std::to_string(k) + "]";
      e.outcomes.push_back(
          {ReadRational(Field(outcomes[k], "value", ok), ok + ".value"),
           ReadRational(Field(outcomes[k], "prob", ok), ok + ".prob")});
    }
    inst.elements.push_back(std::move(e));
  }
  PadOutcomes(inst);
  ThrowViolations(Validate(inst));
  return inst;
}

UpmInstance ParseUpm(const Json& node) {
  RequireKind(node, "upm");
  UpmInstance inst;
  inst.matroid = ParseMatroid(Field(node, "matroid", "instance"));
  inst.special = ReadInt(Field(node, "special", "instance"), "special");
  const int n = inst.matroid->size();
  inst.probs.assign(n, Rational(0));
  std::vector<bool> seen(n, false);
  const Json& probs = Field(node, "probs", "instance");
  auto set = [&](int i, const Json& value) {
    const std::string at = "probs[" + std::to_string(i) + "]";
    if (i < 0 || i >= n) Fail(at, "element index out of range");
    inst.probs[i] = ReadRational(value, at);
    seen[i] = true;
  };
  if (probs.is_object()) {
    for (auto it = probs.begin(); it != probs.end(); ++it) {
      int i = -1;
      try {
        std::size_t used = 0;
        i = std::stoi(it.key(), &used);
        if (used != it.key().size()) i = -1;
      } catch (const std::exception&) {
        i = -1;
      }
      if (i < 0) Fail("probs", "bad element key \"" + it.key() + "\"");
      set(i, it.value());
    }
  } else if (probs.is_array()) {
    if (static_cast<int>(probs.size()) != n) {
      Fail("probs", "array must have one entry per element");
    }
    for (int i = 0; i < n; ++i) set(i, probs[i]);
  } else {
    Fail("probs", "expected an object or array");
  }
  std::vector<std::string> problems = Validate(inst);
  for (int i = 0; i < n; ++i) {
    if (i != inst.special && !seen[i]) {
      problems.push_back("element " + std::to_string(i) +
                         ": probability missing");
    }
  }
  ThrowViolations(problems);
  return inst;
}

Instance ParseInstanceText(const std::string& text) {
  Json node;
  try {
    node = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ValidationError(std::string("syntax error: ") + e.what());
  }
  const Json& kind = Field(node, "kind", "instance");
  if (kind == "olcpm") return ParseOlcpm(node);
  if (kind == "upm") return ParseUpm(node);
  Fail("instance.kind", "expected \"olcpm\" or \"upm\"");
}

Instance LoadInstance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ParseInstanceText(buffer.str());
}

Json ToJson(const OlcpmInstance& instance) {
  Json out;
  out["kind"] = "olcpm";
  out["matroid"] = MatroidToJson(*instance.matroid);
  Json elements = Json::array();
  for (const auto& e : instance.elements) {
    Json outcomes = Json::array();
    for (const auto& o : e.outcomes) {
      outcomes.push_back({{"value", ToString(o.value)},
                          {"prob", ToString(o.prob)}});
    }
    elements.push_back({{"cost", ToString(e.cost)}, {"outcomes", outcomes}});
  }
  out["elements"] = elements;
  return out;
}

Json ToJson(const UpmInstance& instance) {
  Json out;
  out["kind"] = "upm";
  out["matroid"] = MatroidToJson(*instance.matroid);
  out["special"] = instance.special;
  Json probs = Json::object();
  for (int i = 0; i < instance.n(); ++i) {
    if (i != instance.special) probs[std::to_string(i)] = ToString(instance.probs[i]);
  }
  out["probs"] = probs;
  return out;
}

std::string FormatDouble(double value) {
  if (!std::isfinite(value)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string DumpJson(const Json& value) {
  std::string out;
  DumpTo(value, out);
  return out;
}

}  // namespace matcon
