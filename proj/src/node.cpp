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

#include "qseal/node.hpp"

#include <chrono>
#include <condition_variable>
#include <deque>
#include <exception>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <thread>

#include "qseal/error.hpp"

namespace qseal::node {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

WindowResult process_window(std::span<const sim::DetectionEvent> events, std::uint32_t window_id,
                            const RunConfig& cfg) {
    WindowResult r;
    r.window_id = window_id;
    r.events = events.size();
    r.raw = wire::find_coincidences(events, cfg.wire.coincidence);
    r.corrected = wire::correct_counts(r.raw, wire::monitored_efficiency(cfg.source.pathway_efficiency));
    r.kappa = wire::reduce_to_kappa(r.corrected);
    r.estimate = estimation::estimate_correlation(r.kappa, window_id);
    r.verdict = decision::decide(r.estimate, cfg.decision);
    return r;
}

std::vector<sim::DetectionEvent> simulate_run_window(const RunConfig& cfg, std::uint32_t window_id) {
    auto source = cfg.source;
    source.seed = sim::window_seed(cfg.source.seed, window_id);
    const std::uint64_t start = static_cast<std::uint64_t>(window_id) * source.ticks_per_window();
    return sim::simulate_window(cfg.scenario_for(window_id), source, cfg.temporal, start);
}

json verdict_record(const WindowResult& r) {
    return {
        {"window_id", r.window_id},
        {"k_sd", r.kappa.k_sd},
        {"k_ss", r.kappa.k_ss},
        {"k_ds", r.kappa.k_ds},
        {"k_dd", r.kappa.k_dd},
        {"e_kappa", r.estimate.e_kappa},
        {"sigma_kappa", r.estimate.sigma_kappa},
        {"outcome", std::string(decision::to_string(r.verdict.outcome))},
    };
}

std::vector<WindowResult> run_in_process(const RunConfig& cfg) {
    std::vector<WindowResult> out;
    out.reserve(cfg.wire.windows);
    for (std::uint32_t w = 0; w < cfg.wire.windows; ++w) {
        const auto events = simulate_run_window(cfg, w);
        out.push_back(process_window(events, w, cfg));
    }
    return out;
}

namespace {

json channel_counts(const std::vector<sim::DetectionEvent>& events) {
    std::array<std::size_t, sim::kChannelCount> n{};
    for (const auto& e : events) {
        ++n[e.channel];
    }
    json j = json::object();
    for (std::uint8_t c = 0; c < sim::kActiveChannelCount; ++c) {
        j[std::string(*sim::channel_label(c))] = n[c];
    }
    return j;
}

}  // namespace

int run_source(const RunConfig& cfg, std::ostream& log) {
    net::UdpSocket socket;
    socket.connect(cfg.wire.host, cfg.wire.port);
    wire::PacketStreamEncoder encoder(cfg.wire.node_id);
    const auto gap = std::chrono::microseconds(cfg.wire.packet_gap_us);
    const auto window = std::chrono::duration<double>(cfg.wire.window_seconds);
    const auto start = Clock::now();

    for (std::uint32_t w = 0; w < cfg.wire.windows; ++w) {
        const auto events = simulate_run_window(cfg, w);
        const auto packets = encoder.encode_window(events, w);
        std::vector<std::vector<std::uint8_t>> datagrams;
        datagrams.reserve(packets.size());
        for (const auto& p : packets) {
            datagrams.push_back(wire::encode(p));
        }
        if (cfg.wire.realtime) {
            std::this_thread::sleep_until(start + std::chrono::duration_cast<Clock::duration>((w + 1) * window));
        }

        // A refusal may belong to any datagram since the last check, so a
        // failed attempt resends the whole window; the monitor drops the
        // duplicates by sequence number.
        int attempt = 0;
        bool delivered = false;
        while (!delivered && attempt < cfg.wire.max_attempts) {
            ++attempt;
            delivered = true;
            for (const auto& d : datagrams) {
                if (!socket.send(d)) {
                    delivered = false;
                    break;
                }
                if (gap.count() > 0) {
                    std::this_thread::sleep_for(gap);
                }
            }
            if (!delivered && attempt < cfg.wire.max_attempts) {
                const double backoff = cfg.wire.retry_backoff_seconds * std::ldexp(1.0, attempt - 1);
                std::this_thread::sleep_for(std::chrono::duration<double>(backoff));
            }
        }
        if (!delivered) {
            std::cerr << "qseal: monitor at " << cfg.wire.host << ':' << cfg.wire.port << " unreachable after "
                      << attempt << " attempts\n";
            return kExitTransport;
        }

        json line = {
            {"window_id", w},
            {"scenario", scenario_name(cfg.scenario_for(w))},
            {"events", events.size()},
            {"packets", packets.size()},
            {"first_sequence", packets.front().sequence},
            {"attempts", attempt},
            {"channels", channel_counts(events)},
        };
        log << line.dump() << '\n' << std::flush;
    }
    return kExitOk;
}

json MonitorSummary::to_json() const {
    return {
        {"windows", windows},
        {"datagrams", datagrams},
        {"malformed", malformed},
        {"foreign", foreign},
        {"timeouts", timeouts},
        {"authentic", authentic},
        {"tamper_alarms", tamper_alarms},
        {"blackout_alarms", blackout_alarms},
        {"packets", wire.packets},
        {"gaps", wire.gaps},
        {"reordered", wire.reordered},
        {"duplicates", wire.duplicates},
        {"late", wire.late},
    };
}

Monitor::Monitor(RunConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.validate();
    socket_.bind(cfg_.wire.host, cfg_.wire.port);
    port_ = socket_.local_port();
}

MonitorSummary Monitor::run(const std::function<void(const WindowResult&)>& on_window) {
    MonitorSummary summary;

    std::mutex mutex;
    std::condition_variable cv;
    std::deque<wire::ClosedWindow> ready;
    bool receiver_done = false;
    std::exception_ptr receiver_error;

    // Reception, reassembly and window closing. Windows are handed over in
    // window-id order.
    std::thread receiver([&] {
        try {
            wire::WindowReassembler reassembler;
            std::map<std::uint32_t, wire::ClosedWindow> completed;
            std::uint32_t expected = 0;
            const auto timeout = std::chrono::duration<double>(2.0 * cfg_.wire.window_seconds);
            auto last_progress = Clock::now();

            const auto hand_over = [&](wire::ClosedWindow w) {
                std::lock_guard lock(mutex);
                ready.push_back(std::move(w));
                cv.notify_one();
            };

            while (expected < cfg_.wire.windows && !stop_) {
                if (auto datagram = socket_.receive(std::chrono::milliseconds(50))) {
                    ++summary.datagrams;
                    auto decoded = wire::decode_packet(*datagram);
                    if (std::holds_alternative<wire::DecodeError>(decoded)) {
                        ++summary.malformed;
                    } else {
                        auto& packet = std::get<wire::EventPacket>(decoded);
                        if (packet.node_id != cfg_.wire.node_id) {
                            ++summary.foreign;
                        } else {
                            if (packet.window_id == expected) {
                                last_progress = Clock::now();
                            }
                            auto [status, closed] = reassembler.accept(std::move(packet));
                            (void)status;
                            if (closed && closed->window_id >= expected) {
                                completed.emplace(closed->window_id, std::move(*closed));
                            }
                        }
                    }
                }
                for (auto it = completed.find(expected); it != completed.end(); it = completed.find(expected)) {
                    hand_over(std::move(it->second));
                    completed.erase(it);
                    ++expected;
                    last_progress = Clock::now();
                }
                if (expected < cfg_.wire.windows && Clock::now() - last_progress > timeout) {
                    auto closed = reassembler.close(cfg_.wire.node_id, expected);
                    wire::ClosedWindow w;
                    if (closed) {
                        w = std::move(*closed);
                    } else {
                        w.node_id = cfg_.wire.node_id;
                        w.window_id = expected;
                    }
                    ++summary.timeouts;
                    hand_over(std::move(w));
                    ++expected;
                    last_progress = Clock::now();
                }
            }
            summary.wire = reassembler.stats();
        } catch (...) {
            receiver_error = std::current_exception();
        }
        std::lock_guard lock(mutex);
        receiver_done = true;
        cv.notify_one();
    });

    std::ofstream alarm_log;
    if (!cfg_.output.alarm_log.empty()) {
        alarm_log.open(cfg_.output.alarm_log, std::ios::app);
        if (!alarm_log) {
            stop_ = true;
            receiver.join();
            throw IoError("cannot open alarm log " + cfg_.output.alarm_log);
        }
    }

    std::exception_ptr processing_error;
    for (;;) {
        wire::ClosedWindow window;
        {
            std::unique_lock lock(mutex);
            cv.wait(lock, [&] { return !ready.empty() || receiver_done; });
            if (ready.empty()) {
                break;
            }
            window = std::move(ready.front());
            ready.pop_front();
        }
        try {
            const auto result = process_window(window.events, window.window_id, cfg_);
            if (alarm_log.is_open()) {
                alarm_log << verdict_record(result).dump() << '\n' << std::flush;
            }
            ++summary.windows;
            switch (result.verdict.outcome) {
                case decision::Outcome::Authentic: ++summary.authentic; break;
                case decision::Outcome::TamperAlarm: ++summary.tamper_alarms; break;
                case decision::Outcome::BlackoutAlarm: ++summary.blackout_alarms; break;
            }
            if (on_window) {
                on_window(result);
            }
        } catch (...) {
            processing_error = std::current_exception();
            stop_ = true;
            break;
        }
    }
    receiver.join();
    if (receiver_error) {
        std::rethrow_exception(receiver_error);
    }
    if (processing_error) {
        std::rethrow_exception(processing_error);
    }
    return summary;
}

}  // namespace qseal::node
