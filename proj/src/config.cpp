// Copyright 2026 The qseal Authors
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

#include "qseal/config.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <string_view>
#include <type_traits>

#include "qseal/error.hpp"

namespace qseal::node {

using nlohmann::json;

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_object(const json& j, std::string_view where) {
    if (!j.is_object()) {
        throw ValidationError(std::string(where) + ": expected a JSON object");
    }
}

void reject_unknown(const json& j, std::string_view where, std::initializer_list<std::string_view> known) {
    for (const auto& [key, _] : j.items()) {
        bool ok = false;
        for (auto k : known) {
            ok = ok || key == k;
        }
        if (!ok) {
            throw ValidationError(std::string(where) + ": unknown key '" + key + "'");
        }
    }
}

template <class T>
void read(const json& j, const char* key, T& out) {
    if (auto it = j.find(key); it != j.end()) {
        try {
            if constexpr (std::is_integral_v<T> && !std::is_same_v<T, bool>) {
                if (!it->is_number_integer()) {
                    throw ValidationError(std::string("config key '") + key + "' must be an integer");
                }
                const bool neg = it->is_number_unsigned() ? false : it->get<std::int64_t>() < 0;
                const bool fits = neg ? std::is_signed_v<T> &&
                                            it->get<std::int64_t>() >= std::int64_t{std::numeric_limits<T>::min()}
                                      : it->get<std::uint64_t>() <= std::uint64_t{std::numeric_limits<T>::max()};
                if (!fits) {
                    throw ValidationError(std::string("config key '") + key + "' is out of range");
                }
            }
            out = it->get<T>();
        } catch (const json::exception& e) {
            throw ValidationError(std::string("config key '") + key + "': " + e.what());
        }
    }
}

double number(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || !it->is_number()) {
        throw ValidationError(std::string("missing numeric key '") + key + "'");
    }
    return it->get<double>();
}

photonics::Complex complex_from_json(const json& j) {
    if (j.is_number()) {
        return {j.get<double>(), 0.0};
    }
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
        return {j[0].get<double>(), j[1].get<double>()};
    }
    throw ValidationError("complex amplitude must be a number or [re, im]");
}

photonics::TwoPhotonState state_from_json(const json& j) {
    require_object(j, "intercept_resend");
    if (j.contains("bell")) {
        const auto name = j.at("bell").get<std::string>();
        if (name == "psi_plus") return photonics::to_state(photonics::BellState::PsiPlus);
        if (name == "psi_minus") return photonics::to_state(photonics::BellState::PsiMinus);
        if (name == "phi_plus") return photonics::to_state(photonics::BellState::PhiPlus);
        if (name == "phi_minus") return photonics::to_state(photonics::BellState::PhiMinus);
        throw ValidationError("unknown Bell state '" + name + "'");
    }
    if (j.contains("separable")) {
        const auto& s = j.at("separable");
        require_object(s, "separable");
        reject_unknown(s, "separable", {"alpha", "beta", "A", "B"});
        return photonics::separable_state(number(s, "alpha"), number(s, "beta"), s.value("A", 0.0), s.value("B", 0.0));
    }
    if (j.contains("state")) {
        const auto& s = j.at("state");
        require_object(s, "state");
        reject_unknown(s, "state", {"a", "b", "c", "d"});
        const auto get = [&](const char* k) {
            return s.contains(k) ? complex_from_json(s.at(k)) : photonics::Complex{};
        };
        return photonics::TwoPhotonState(get("a"), get("b"), get("c"), get("d"));
    }
    throw ValidationError("intercept_resend needs one of 'bell', 'separable' or 'state'");
}

json state_to_json(const photonics::TwoPhotonState& s) {
    const auto c = [](photonics::Complex z) { return json::array({z.real(), z.imag()}); };
    return {{"a", c(s.a())}, {"b", c(s.b())}, {"c", c(s.c())}, {"d", c(s.d())}};
}

attack::BaseScenario base_from_json(const json& j) {
    require_object(j, "scenario");
    const auto type = j.value("type", std::string{});
    if (type == "authentic") {
        reject_unknown(j, "authentic", {"type", "phase"});
        return attack::Authentic{j.value("phase", photonics::kPi)};
    }
    if (type == "intercept_resend") {
        reject_unknown(j, "intercept_resend", {"type", "bell", "separable", "state"});
        return attack::InterceptResend{state_from_json(j)};
    }
    if (type == "redirection") {
        reject_unknown(j, "redirection", {"type", "t_d", "length_m", "group_index"});
        if (j.contains("length_m")) {
            return attack::Redirection{photonics::delay_from_length(number(j, "length_m"), j.value("group_index", 1.47))};
        }
        return attack::Redirection{number(j, "t_d")};
    }
    if (type == "blackout") {
        reject_unknown(j, "blackout", {"type"});
        return attack::Blackout{};
    }
    if (type == "short_time_injection") {
        throw ValidationError("short_time_injection cannot be nested inside another injection");
    }
    throw ValidationError("unknown scenario type '" + type + "'");
}

double read_positive(const json& j, const char* key, double fallback) {
    double v = fallback;
    read(j, key, v);
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw ValidationError(std::string("config key '") + key + "' must be positive");
    }
    return v;
}

sim::SourceConfig source_from_json(const json& j) {
    require_object(j, "source");
    reject_unknown(j, "source",
                   {"pair_rate", "pathway_efficiency", "dark_rate", "background_rate", "jitter_sigma", "clock_tick",
                    "seed"});
    sim::SourceConfig s;
    read(j, "pair_rate", s.pair_rate);
    read(j, "dark_rate", s.dark_rate);
    read(j, "background_rate", s.background_rate);
    read(j, "jitter_sigma", s.jitter_sigma);
    read(j, "clock_tick", s.clock_tick);
    read(j, "seed", s.seed);
    if (auto it = j.find("pathway_efficiency"); it != j.end()) {
        if (it->is_number()) {
            s.pathway_efficiency = sim::SourceConfig::uniform_efficiency(it->get<double>());
        } else {
            require_object(*it, "pathway_efficiency");
            for (const auto& [key, value] : it->items()) {
                bool found = false;
                for (auto p : photonics::kAllPathways) {
                    if (photonics::pathway_name(p) == key) {
                        s.pathway_efficiency[static_cast<std::size_t>(p)] = value.get<double>();
                        found = true;
                    }
                }
                if (!found) {
                    throw ValidationError("pathway_efficiency: unknown pathway '" + key + "'");
                }
            }
        }
    }
    return s;
}

}  // namespace

attack::TamperScenario scenario_from_json(const json& j) {
    require_object(j, "scenario");
    if (j.value("type", std::string{}) == "short_time_injection") {
        reject_unknown(j, "short_time_injection", {"type", "inner", "duration", "phase"});
        if (!j.contains("inner")) {
            throw ValidationError("short_time_injection needs an 'inner' scenario");
        }
        attack::ShortTimeInjection inj{base_from_json(j.at("inner")), number(j, "duration"),
                                       j.value("phase", photonics::kPi)};
        if (!(inj.duration >= 0.0)) {
            throw ValidationError("injection duration must be non-negative");
        }
        return inj;
    }
    return attack::to_scenario(base_from_json(j));
}

json scenario_to_json(const attack::TamperScenario& s) {
    const auto base = [](const attack::BaseScenario& b) {
        return std::visit(overloaded{
                              [](const attack::Authentic& a) { return json{{"type", "authentic"}, {"phase", a.phase}}; },
                              [](const attack::InterceptResend& r) {
                                  return json{{"type", "intercept_resend"}, {"state", state_to_json(r.state)}};
                              },
                              [](const attack::Redirection& r) { return json{{"type", "redirection"}, {"t_d", r.t_d}}; },
                              [](const attack::Blackout&) { return json{{"type", "blackout"}}; },
                          },
                          b);
    };
    return std::visit(overloaded{
                          [&](const attack::ShortTimeInjection& inj) {
                              return json{{"type", "short_time_injection"},
                                          {"inner", base(inj.inner)},
                                          {"duration", inj.duration},
                                          {"phase", inj.phase}};
                          },
                          [&](const auto& b) { return base(attack::BaseScenario{b}); },
                      },
                      s);
}

std::string scenario_name(const attack::TamperScenario& s) {
    return scenario_to_json(s).at("type").get<std::string>();
}

const attack::TamperScenario& RunConfig::scenario_for(std::uint32_t window_id) const {
    const attack::TamperScenario* current = &scenario;
    for (const auto& e : schedule) {
        if (e.start_window <= window_id) {
            current = &e.scenario;
        }
    }
    return *current;
}

void RunConfig::validate() const {
    source.validate();
    decision.validate();
    if (!(wire.window_seconds > 0.0)) {
        throw ValidationError("wire.window_seconds must be positive");
    }
    if (std::abs(source.duration - wire.window_seconds) > 1e-12 * wire.window_seconds) {
        throw ValidationError("source duration must equal wire.window_seconds");
    }
    for (std::size_t i = 1; i < schedule.size(); ++i) {
        if (schedule[i].start_window <= schedule[i - 1].start_window) {
            throw ValidationError("schedule windows must be strictly increasing");
        }
    }
    if (wire.max_attempts < 1) {
        throw ValidationError("wire.max_attempts must be at least 1");
    }
    if (wire.coincidence.window_ticks < 1) {
        throw ValidationError("wire.coincidence_window_ticks must be at least 1");
    }
}

double expected_coincidences(const sim::SourceConfig& source, double phase) {
    const auto probs = photonics::multimode_probabilities(phase, photonics::TemporalModel::ideal());
    double rate = 0.0;
    for (auto p : wire::kMonitoredPathways) {
        // Same-port pairs on the split detectors are seen half the time.
        const double seen = (p == photonics::Pathway::H2H2 || p == photonics::Pathway::V2V2) ? 0.5 : 1.0;
        rate += probs.pathway(p) * source.efficiency(p) * seen;
    }
    return rate * source.pair_rate * source.duration;
}

RunConfig parse_run_config(const json& j) {
    require_object(j, "config");
    reject_unknown(j, "config", {"source", "scenario", "schedule", "temporal", "wire", "decision", "output"});
    RunConfig cfg;
    try {
        if (j.contains("wire")) {
            const auto& w = j.at("wire");
            require_object(w, "wire");
            reject_unknown(w, "wire",
                           {"host", "port", "window_seconds", "windows", "realtime", "node_id", "packet_gap_us",
                            "max_attempts", "retry_backoff_seconds", "coincidence_window_ticks", "acc_offset"});
            read(w, "host", cfg.wire.host);
            read(w, "port", cfg.wire.port);
            cfg.wire.window_seconds = read_positive(w, "window_seconds", cfg.wire.window_seconds);
            read(w, "windows", cfg.wire.windows);
            read(w, "realtime", cfg.wire.realtime);
            read(w, "node_id", cfg.wire.node_id);
            read(w, "packet_gap_us", cfg.wire.packet_gap_us);
            read(w, "max_attempts", cfg.wire.max_attempts);
            read(w, "retry_backoff_seconds", cfg.wire.retry_backoff_seconds);
            read(w, "coincidence_window_ticks", cfg.wire.coincidence.window_ticks);
            read(w, "acc_offset", cfg.wire.coincidence.acc_offset);
        }
        if (j.contains("source")) {
            cfg.source = source_from_json(j.at("source"));
        }
        cfg.source.duration = cfg.wire.window_seconds;

        if (j.contains("scenario")) {
            cfg.scenario = scenario_from_json(j.at("scenario"));
        }
        if (j.contains("schedule")) {
            const auto& s = j.at("schedule");
            if (!s.is_array()) {
                throw ValidationError("schedule must be an array");
            }
            for (const auto& e : s) {
                require_object(e, "schedule entry");
                reject_unknown(e, "schedule entry", {"start_window", "scenario"});
                ScheduleEntry entry;
                entry.start_window = e.at("start_window").get<std::uint32_t>();
                entry.scenario = scenario_from_json(e.at("scenario"));
                cfg.schedule.push_back(std::move(entry));
            }
        }
        if (j.contains("temporal")) {
            const auto& t = j.at("temporal");
            require_object(t, "temporal");
            reject_unknown(t, "temporal", {"t_d", "delta_t"});
            cfg.temporal = photonics::TemporalModel(t.value("t_d", 0.0), t.value("delta_t", 8e-12));
        }

        const double authentic_phase =
            std::holds_alternative<attack::Authentic>(cfg.scenario) ? std::get<attack::Authentic>(cfg.scenario).phase
                                                                     : photonics::kPi;
        cfg.decision.min_coincidences = 0.1 * expected_coincidences(cfg.source, authentic_phase);
        if (j.contains("decision")) {
            const auto& d = j.at("decision");
            require_object(d, "decision");
            reject_unknown(d, "decision", {"epsilon", "e0", "e1", "sigma", "min_coincidences", "target_far"});
            read(d, "e0", cfg.decision.model.e0);
            read(d, "e1", cfg.decision.model.e1);
            read(d, "sigma", cfg.decision.model.sigma);
            read(d, "min_coincidences", cfg.decision.min_coincidences);
            if (d.contains("target_far")) {
                if (d.contains("epsilon")) {
                    throw ValidationError("decision: give either epsilon or target_far, not both");
                }
                cfg.decision.epsilon = decision::threshold_for_far(cfg.decision.model.e1, cfg.decision.model.sigma,
                                                                   d.at("target_far").get<double>());
            }
            read(d, "epsilon", cfg.decision.epsilon);
        }
        if (j.contains("output")) {
            const auto& o = j.at("output");
            require_object(o, "output");
            reject_unknown(o, "output", {"alarm_log", "source_log"});
            read(o, "alarm_log", cfg.output.alarm_log);
            read(o, "source_log", cfg.output.source_log);
        }
    } catch (const json::exception& e) {
        throw ValidationError(std::string("config: ") + e.what());
    } catch (const DomainError& e) {
        throw ValidationError(std::string("config: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open config file " + path.string());
    }
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError("config " + path.string() + ": " + e.what());
    }
    return parse_run_config(j);
}

}  // namespace qseal::node
