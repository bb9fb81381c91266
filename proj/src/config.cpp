// Copyright 2026 The vidtex Authors
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

#include "vidtex/config.h"

#include <charconv>
#include <functional>
#include <stdexcept>
#include <vector>

#include <fmt/format.h>

#include "vidtex/error.h"

namespace vidtex {

namespace {

std::string_view Trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const size_t b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const size_t e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

template <typename T>
T ParseNumber(std::string_view key, std::string_view v) {
  T out{};
  const auto* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw DataError(fmt::format("config key '{}': cannot parse '{}'", key, v));
  }
  return out;
}

bool ParseBool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw DataError(fmt::format("config key '{}': expected true/false, got '{}'", key, v));
}

struct Field {
  std::string_view key;
  std::function<void(TrainConfig&, std::string_view)> set;
  std::function<std::string(const TrainConfig&)> get;
};

template <typename T>
Field Numeric(std::string_view key, T TrainConfig::*member) {
  return Field{key,
               [key, member](TrainConfig& c, std::string_view v) { c.*member = ParseNumber<T>(key, v); },
               [member](const TrainConfig& c) {
                 if constexpr (std::is_floating_point_v<T>) {
                   return fmt::format("{:.17g}", c.*member);
                 } else {
                   return fmt::format("{}", c.*member);
                 }
               }};
}

const std::vector<Field>& Fields() {
  static const std::vector<Field> fields = {
      Numeric("clip_len", &TrainConfig::clip_len),
      Numeric("coarsest", &TrainConfig::coarsest),
      Numeric("finest", &TrainConfig::finest),
      Numeric("num_scales", &TrainConfig::num_scales),
      Numeric("steps_per_scale", &TrainConfig::steps_per_scale),
      Numeric("d_steps", &TrainConfig::d_steps),
      Numeric("g_steps", &TrainConfig::g_steps),
      Numeric("lr_g", &TrainConfig::lr_g),
      Numeric("lr_d", &TrainConfig::lr_d),
      Numeric("lr_decay_at", &TrainConfig::lr_decay_at),
      Numeric("lr_decay_factor", &TrainConfig::lr_decay_factor),
      Numeric("adam_beta1", &TrainConfig::adam_beta1),
      Numeric("adam_beta2", &TrainConfig::adam_beta2),
      Numeric("lambda_gp", &TrainConfig::lambda_gp),
      Numeric("eta", &TrainConfig::eta),
      Field{"update_period",
            [](TrainConfig& c, std::string_view v) {
              c.update_period = (v == "inf") ? kNeverUpdate : ParseNumber<int64_t>("update_period", v);
            },
            [](const TrainConfig& c) {
              return c.update_period == kNeverUpdate ? std::string("inf")
                                                     : fmt::format("{}", c.update_period);
            }},
      Numeric("update_stride", &TrainConfig::update_stride),
      Numeric("seed", &TrainConfig::seed),
      Numeric("hidden_channels", &TrainConfig::hidden_channels),
      Numeric("gen_layers", &TrainConfig::gen_layers),
      Numeric("disc_layers", &TrainConfig::disc_layers),
      Numeric("kernel_size", &TrainConfig::kernel_size),
      Numeric("leaky_slope", &TrainConfig::leaky_slope),
      Numeric("bn_eps", &TrainConfig::bn_eps),
      Numeric("init_std", &TrainConfig::init_std),
      Field{"padding",
            [](TrainConfig& c, std::string_view v) {
              if (v == "zero") {
                c.padding = ad::PaddingMode::kZero;
              } else if (v == "reflect") {
                c.padding = ad::PaddingMode::kReflect;
              } else {
                throw DataError(fmt::format("config key 'padding': expected zero|reflect, got '{}'", v));
              }
            },
            [](const TrainConfig& c) {
              return std::string(c.padding == ad::PaddingMode::kZero ? "zero" : "reflect");
            }},
      Field{"debug_freeze_check",
            [](TrainConfig& c, std::string_view v) { c.debug_freeze_check = ParseBool("debug_freeze_check", v); },
            [](const TrainConfig& c) { return std::string(c.debug_freeze_check ? "true" : "false"); }},
  };
  return fields;
}

}  // namespace

TrainConfig TrainConfig::Desk() {
  TrainConfig c;
  c.coarsest = 12;
  c.finest = 48;
  c.num_scales = 3;
  c.steps_per_scale = 500;
  c.hidden_channels = 8;
  c.d_steps = 1;
  c.g_steps = 1;
  c.eta = 100.0;
  return c;
}

TrainConfig TrainConfig::Profile(std::string_view name) {
  if (name == "full") return Full();
  if (name == "desk") return Desk();
  throw DataError(fmt::format("unknown profile '{}' (expected full|desk)", name));
}

void TrainConfig::Validate() const {
  auto require = [](bool ok, std::string_view what) {
    if (!ok) throw std::invalid_argument(fmt::format("invalid config: {}", what));
  };
  require(clip_len >= 1, "clip_len >= 1");
  require(coarsest >= 1, "coarsest >= 1");
  require(num_scales >= 1, "num_scales >= 1");
  require(num_scales == 1 ? coarsest <= finest : coarsest < finest,
          "coarsest < finest (or num_scales = 1)");
  require(steps_per_scale >= 1, "steps_per_scale >= 1");
  require(d_steps >= 1 && g_steps >= 1, "d_steps, g_steps >= 1");
  require(lr_g > 0 && lr_d > 0, "learning rates > 0");
  require(lr_decay_at >= 0 && lr_decay_at <= 1, "lr_decay_at in [0, 1]");
  require(adam_beta1 >= 0 && adam_beta1 < 1 && adam_beta2 >= 0 && adam_beta2 < 1, "adam betas in [0, 1)");
  require(lambda_gp >= 0 && eta >= 0, "lambda_gp, eta >= 0");
  require(update_period >= 1, "update_period >= 1");
  require(update_stride >= 1, "update_stride >= 1");
  require(hidden_channels >= 1, "hidden_channels >= 1");
  require(gen_layers >= 2 && disc_layers >= 2, "gen_layers, disc_layers >= 2");
  require(kernel_size >= 1 && kernel_size % 2 == 1, "kernel_size odd and >= 1");
  require(leaky_slope > 0 && leaky_slope < 1, "leaky_slope in (0, 1)");
  require(bn_eps > 0, "bn_eps > 0");
  require(init_std >= 0, "init_std >= 0");
}

void TrainConfig::Set(std::string_view key, std::string_view value) {
  for (const auto& f : Fields()) {
    if (f.key == key) {
      f.set(*this, Trim(value));
      return;
    }
  }
  throw DataError(fmt::format("unknown config key '{}'", key));
}

void TrainConfig::ApplyText(std::string_view text) {
  size_t line_no = 0;
  while (!text.empty()) {
    const size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const size_t hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = Trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw DataError(fmt::format("config line {}: expected 'key = value', got '{}'", line_no, line));
    }
    Set(Trim(line.substr(0, eq)), Trim(line.substr(eq + 1)));
  }
}

std::string TrainConfig::ToText() const {
  std::string out;
  for (const auto& f : Fields()) out += fmt::format("{} = {}\n", f.key, f.get(*this));
  return out;
}

}  // namespace vidtex
