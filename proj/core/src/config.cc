// Copyright 2026 The PRoBit Lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "probit/config.h"

#include <array>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <limits>
#include <set>
#include <sstream>
#include <utility>
#include <vector>

#include <fmt/format.h>

#include "probit/errors.h"

namespace probit {
namespace {

constexpr std::array<std::pair<Scheme, std::string_view>, 5> kSchemeNames{{
    {Scheme::kProbitPlus, "probit_plus"},
    {Scheme::kFedAvg, "fedavg"},
    {Scheme::kFedGm, "fed_gm"},
    {Scheme::kSignSgdMv, "signsgd_mv"},
    {Scheme::kRsa, "rsa"},
}};

std::string Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

// Value-level parse failure; the caller attaches line and field.
struct BadValue {
  std::string reason;
};

int64_t ParseInt(const std::string& text) {
  std::size_t used = 0;
  int64_t value = 0;
  try {
    value = std::stoll(text, &used);
  } catch (const std::exception&) {
    throw BadValue{"expected an integer"};
  }
  if (used != text.size()) throw BadValue{"expected an integer"};
  return value;
}

std::size_t ParseCount(const std::string& text) {
  const int64_t value = ParseInt(text);
  if (value < 0) throw BadValue{"expected a non-negative integer"};
  return static_cast<std::size_t>(value);
}

uint64_t ParseSeed(const std::string& text) {
  std::size_t used = 0;
  uint64_t value = 0;
  if (!text.empty() && text.front() == '-') throw BadValue{"seed must be non-negative"};
  try {
    value = std::stoull(text, &used);
  } catch (const std::exception&) {
    throw BadValue{"expected an unsigned integer"};
  }
  if (used != text.size()) throw BadValue{"expected an unsigned integer"};
  return value;
}

double ParseReal(const std::string& text) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    throw BadValue{"expected a number"};
  }
  if (used != text.size() || !std::isfinite(value)) throw BadValue{"expected a finite number"};
  return value;
}

bool ParseBool(const std::string& text) {
  if (text == "true") return true;
  if (text == "false") return false;
  throw BadValue{"expected true or false"};
}

std::string Real(double v) { return fmt::format("{}", v); }
std::string Bool(bool v) { return v ? "true" : "false"; }

std::string_view DynamicBName(DynamicBMode mode) {
  switch (mode) {
    case DynamicBMode::kAuto: return "auto";
    case DynamicBMode::kOn: return "on";
    case DynamicBMode::kOff: return "off";
  }
  return "auto";
}

struct Field {
  std::string_view section;
  std::string_view key;
  std::function<void(ExperimentConfig&, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

#define PROBIT_REAL(sec, name, member)                                     Field{sec, name, [](ExperimentConfig& c, const std::string& v) {                 c.member = ParseReal(v);                                               },                                                                       [](const ExperimentConfig& c) { return Real(c.member); }}
#define PROBIT_COUNT(sec, name, member)                                    Field{sec, name, [](ExperimentConfig& c, const std::string& v) {                 c.member = ParseCount(v);                                              },                                                                       [](const ExperimentConfig& c) { return std::to_string(c.member); }}
#define PROBIT_INT(sec, name, member)                                      Field{sec, name, [](ExperimentConfig& c, const std::string& v) {                 const int64_t x = ParseInt(v);                                           if (x < std::numeric_limits<int>::min() ||                                   x > std::numeric_limits<int>::max()) {                                 throw BadValue{"integer out of range"};                                }                                                                        c.member = static_cast<int>(x);                                        },                                                                       [](const ExperimentConfig& c) { return std::to_string(c.member); }}
#define PROBIT_STRING(sec, name, member)                                   Field{sec, name, [](ExperimentConfig& c, const std::string& v) {                 c.member = v;                                                          },                                                                       [](const ExperimentConfig& c) { return c.member; }}
#define PROBIT_BOOL(sec, name, member)                                     Field{sec, name, [](ExperimentConfig& c, const std::string& v) {                 c.member = ParseBool(v);                                               },                                                                       [](const ExperimentConfig& c) { return Bool(c.member); }}

const std::vector<Field>& Fields() {
  static const std::vector<Field> fields = {
      Field{"experiment", "scheme",
            [](ExperimentConfig& c, const std::string& v) {
              const auto scheme = ParseScheme(v);
              if (!scheme) {
                throw BadValue{
                    "expected one of probit_plus, fedavg, fed_gm, signsgd_mv, rsa"};
              }
              c.scheme = *scheme;
            },
            [](const ExperimentConfig& c) { return std::string(SchemeName(c.scheme)); }},
      Field{"experiment", "seed",
            [](ExperimentConfig& c, const std::string& v) { c.seed = ParseSeed(v); },
            [](const ExperimentConfig& c) { return std::to_string(c.seed); }},
      PROBIT_INT("experiment", "workers", workers),
      PROBIT_STRING("experiment", "output", output),
      PROBIT_COUNT("topology", "clients", clients),
      PROBIT_REAL("topology", "beta", attack.beta),
      Field{"attack", "kind",
            [](ExperimentConfig& c, const std::string& v) {
              const auto kind = ParseAttackKind(v);
              if (!kind) {
                throw BadValue{
                    "expected one of none, gaussian, sign_flip, zero_gradient, "
                    "sample_duplicate, worst_case_bits"};
              }
              c.attack.kind = *kind;
            },
            [](const ExperimentConfig& c) {
              return std::string(AttackKindName(c.attack.kind));
            }},
      PROBIT_REAL("attack", "gaussian_variance", attack.gaussian_variance),
      PROBIT_REAL("attack", "flip_factor", attack.flip_factor),
      Field{"attack", "worst_case_mode",
            [](ExperimentConfig& c, const std::string& v) {
              const auto mode = ParseWorstCaseMode(v);
              if (!mode) throw BadValue{"expected all_plus or flip"};
              c.attack.worst_case_mode = *mode;
            },
            [](const ExperimentConfig& c) {
              return std::string(WorstCaseModeName(c.attack.worst_case_mode));
            }},
      PROBIT_BOOL("attack", "lie_in_loss_vote", attack.lie_in_loss_vote),
      PROBIT_BOOL("privacy", "enabled", privacy.enabled),
      PROBIT_REAL("privacy", "epsilon", privacy.epsilon),
      PROBIT_REAL("privacy", "delta1", privacy.delta1),
      PROBIT_INT("schedule", "rounds", schedule.rounds),
      PROBIT_INT("schedule", "local_epochs", schedule.local_epochs),
      PROBIT_COUNT("schedule", "batch_size", schedule.batch_size),
      PROBIT_REAL("schedule", "lr", schedule.lr),
      PROBIT_REAL("schedule", "momentum", schedule.momentum),
      PROBIT_REAL("schedule", "lambda", schedule.lambda),
      PROBIT_REAL("schedule", "gamma", schedule.gamma),
      PROBIT_REAL("quant", "b_init", quant.b_init),
      Field{"quant", "dynamic_b",
            [](ExperimentConfig& c, const std::string& v) {
              if (v == "auto") {
                c.quant.dynamic_b = DynamicBMode::kAuto;
              } else if (v == "on") {
                c.quant.dynamic_b = DynamicBMode::kOn;
              } else if (v == "off") {
                c.quant.dynamic_b = DynamicBMode::kOff;
              } else {
                throw BadValue{"expected auto, on or off"};
              }
            },
            [](const ExperimentConfig& c) {
              return std::string(DynamicBName(c.quant.dynamic_b));
            }},
      PROBIT_REAL("server", "server_lr", server.server_lr),
      PROBIT_REAL("server", "sign_step", server.sign_step),
      PROBIT_REAL("server", "rsa_lambda", server.rsa_lambda),
      PROBIT_REAL("server", "gm_tol", server.gm_tol),
      PROBIT_INT("server", "gm_max_iter", server.gm_max_iter),
      PROBIT_STRING("data", "source", data.source),
      PROBIT_INT("data", "classes", data.classes),
      PROBIT_COUNT("data", "features", data.features),
      PROBIT_COUNT("data", "per_class", data.per_class),
      PROBIT_COUNT("data", "test_per_class", data.test_per_class),
      PROBIT_REAL("data", "spread", data.spread),
      PROBIT_INT("data", "classes_per_client", data.classes_per_client),
      PROBIT_STRING("data", "train_csv", data.train_csv),
      PROBIT_STRING("data", "test_csv", data.test_csv),
      Field{"learner", "kind",
            [](ExperimentConfig& c, const std::string& v) {
              const auto kind = ParseLearnerKind(v);
              if (!kind) throw BadValue{"expected logistic or mlp"};
              c.learner.kind = *kind;
            },
            [](const ExperimentConfig& c) {
              return std::string(LearnerKindName(c.learner.kind));
            }},
      PROBIT_COUNT("learner", "hidden", learner.hidden),
  };
  return fields;
}

#undef PROBIT_REAL
#undef PROBIT_COUNT
#undef PROBIT_INT
#undef PROBIT_STRING
#undef PROBIT_BOOL

void Require(bool ok, std::string_view field, std::string_view message) {
  if (!ok) throw ConfigError(fmt::format("{}: {}", field, message));
}

}  // namespace

std::string_view SchemeName(Scheme scheme) {
  for (const auto& [s, name] : kSchemeNames) {
    if (s == scheme) return name;
  }
  return "unknown";
}

std::optional<Scheme> ParseScheme(std::string_view name) {
  for (const auto& [s, n] : kSchemeNames) {
    if (n == name) return s;
  }
  return std::nullopt;
}

bool IsBitScheme(Scheme scheme) {
  return scheme == Scheme::kProbitPlus || scheme == Scheme::kSignSgdMv ||
         scheme == Scheme::kRsa;
}

bool ExperimentConfig::DynamicBEnabled() const {
  if (scheme != Scheme::kProbitPlus) return false;
  switch (quant.dynamic_b) {
    case DynamicBMode::kOn: return true;
    case DynamicBMode::kOff: return false;
    case DynamicBMode::kAuto: return attack.kind == AttackKind::kNone || attack.beta == 0.0;
  }
  return false;
}

void ExperimentConfig::Validate() const {
  Require(clients >= 1, "[topology] clients", "must be at least 1");
  Require(workers >= 1, "[experiment] workers", "must be at least 1");
  Require(!output.empty(), "[experiment] output", "must not be empty");
  Require(attack.beta >= 0.0 && attack.beta < 0.5, "[topology] beta", "must lie in [0, 0.5)");
  Require(attack.gaussian_variance >= 0.0, "[attack] gaussian_variance", "must be >= 0");
  Require(!privacy.enabled || privacy.epsilon > 0.0, "[privacy] epsilon", "must be positive");
  Require(!privacy.enabled || privacy.delta1 > 0.0, "[privacy] delta1", "must be positive");
  // Backstop for invariants owned by the component types.
  attack.Validate();
  privacy.Validate();
  Require(ByzantineCount(attack.beta, clients) < clients, "[topology] beta",
          "leaves no honest client");
  Require(attack.kind != AttackKind::kWorstCaseBits || IsBitScheme(scheme),
          "[attack] kind", "worst_case_bits needs a bit-based scheme");
  Require(schedule.rounds >= 0, "[schedule] rounds", "must be >= 0");
  Require(schedule.local_epochs >= 0, "[schedule] local_epochs", "must be >= 0");
  Require(schedule.batch_size >= 1, "[schedule] batch_size", "must be >= 1");
  Require(schedule.lr > 0.0, "[schedule] lr", "must be positive");
  Require(schedule.momentum >= 0.0 && schedule.momentum < 1.0, "[schedule] momentum",
          "must lie in [0, 1)");
  Require(schedule.lambda >= 0.0, "[schedule] lambda", "must be >= 0");
  Require(schedule.gamma >= 0.0 && schedule.gamma <= 1.0, "[schedule] gamma",
          "must lie in [0, 1]");
  Require(quant.b_init > 0.0, "[quant] b_init", "must be positive");
  Require(server.server_lr > 0.0, "[server] server_lr", "must be positive");
  Require(server.sign_step > 0.0, "[server] sign_step", "must be positive");
  Require(server.rsa_lambda >= 0.0, "[server] rsa_lambda", "must be >= 0");
  Require(server.gm_tol > 0.0, "[server] gm_tol", "must be positive");
  Require(server.gm_max_iter >= 1, "[server] gm_max_iter", "must be >= 1");
  Require(data.source == "synthetic" || data.source == "csv", "[data] source",
          "must be synthetic or csv");
  if (data.source == "synthetic") {
    Require(data.classes >= 2 && data.classes <= 1000, "[data] classes",
            "must lie in [2, 1000]");
    Require(data.features >= 1, "[data] features", "must be >= 1");
    Require(data.per_class >= 1, "[data] per_class", "must be >= 1");
    Require(data.test_per_class >= 1, "[data] test_per_class", "must be >= 1");
    Require(data.spread >= 0.0, "[data] spread", "must be >= 0");
    Require(data.classes_per_client >= 1 && data.classes_per_client <= data.classes,
            "[data] classes_per_client", "must lie in [1, classes]");
    Require(data.per_class * static_cast<std::size_t>(data.classes) >= clients,
            "[data] per_class", "too few samples for one per client");
  } else {
    Require(!data.train_csv.empty(), "[data] train_csv", "required when source = csv");
    Require(!data.test_csv.empty(), "[data] test_csv", "required when source = csv");
    Require(data.classes_per_client >= 1, "[data] classes_per_client", "must be >= 1");
  }
  Require(learner.kind == LearnerKind::kLogistic || learner.hidden >= 1,
          "[learner] hidden", "must be >= 1 for the mlp");
}

ExperimentConfig ParseConfig(std::istream& in) {
  ExperimentConfig config;
  std::set<std::string> seen;
  std::string section;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto comment = line.find_first_of("#;");
    const std::string text = Trim(std::string_view(line).substr(0, comment));
    if (text.empty()) continue;
    if (text.front() == '[') {
      if (text.back() != ']') {
        throw ConfigError(fmt::format("line {}: unterminated section header", line_no));
      }
      section = Trim(std::string_view(text).substr(1, text.size() - 2));
      bool known = false;
      for (const Field& f : Fields()) known = known || f.section == section;
      if (!known) {
        throw ConfigError(fmt::format("line {}: unknown section [{}]", line_no, section));
      }
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(fmt::format("line {}: expected key = value", line_no));
    }
    const std::string key = Trim(std::string_view(text).substr(0, eq));
    const std::string value = Trim(std::string_view(text).substr(eq + 1));
    if (section.empty()) {
      throw ConfigError(fmt::format("line {}: key '{}' outside a section", line_no, key));
    }
    const Field* field = nullptr;
    for (const Field& f : Fields()) {
      if (f.section == section && f.key == key) field = &f;
    }
    if (field == nullptr) {
      throw ConfigError(
          fmt::format("line {}: unknown key '{}' in [{}]", line_no, key, section));
    }
    const std::string id = fmt::format("[{}] {}", section, key);
    if (!seen.insert(id).second) {
      throw ConfigError(fmt::format("line {}: duplicate key {}", line_no, id));
    }
    try {
      field->set(config, value);
    } catch (const BadValue& bad) {
      throw ConfigError(
          fmt::format("line {}: {} = '{}': {}", line_no, id, value, bad.reason));
    }
  }
  if (!seen.contains("[experiment] scheme")) {
    throw ConfigError("missing required field [experiment] scheme");
  }
  if (!seen.contains("[privacy] delta1")) {
    // l1-sensitivity convention: 0.02 * learning rate.
    config.privacy.delta1 = 0.02 * config.schedule.lr;
  }
  config.Validate();
  return config;
}

ExperimentConfig ParseConfigString(std::string_view text) {
  std::istringstream in{std::string(text)};
  return ParseConfig(in);
}

ExperimentConfig LoadConfigFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return ParseConfig(in);
}

std::string SerializeConfig(const ExperimentConfig& config) {
  std::string out;
  std::string_view section;
  for (const Field& f : Fields()) {
    if (f.section != section) {
      if (!section.empty()) out += "\n";
      section = f.section;
      out += fmt::format("[{}]\n", section);
    }
    out += fmt::format("{} = {}\n", f.key, f.get(config));
  }
  return out;
}

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
  return SerializeConfig(a) == SerializeConfig(b);
}

}  // namespace probit
