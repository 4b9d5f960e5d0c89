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

// Datagram framing of detection events.
//
// Layout (big-endian), 17-byte header followed by 9-byte records:
//
//   offset size field
//   0      4    magic "QSL1" (0x51 0x53 0x4C 0x31)
//   4      1    version (1)
//   5      1    node_id
//   6      1    flags (bit0: end of window)
//   7      2    record_count (<= 1000)
//   9      4    sequence (per node, +1 per packet)
//   13     4    window_id
//   17     9*n  records: channel (1) tick (8)

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "qseal/event_sim.hpp"

namespace qseal::wire {

using sim::DetectionEvent;

inline constexpr std::uint8_t kVersion = 1;
inline constexpr std::size_t kHeaderSize = 17;
inline constexpr std::size_t kRecordSize = 9;
inline constexpr std::size_t kMaxRecords = 1000;
inline constexpr std::size_t kMaxPacketSize = kHeaderSize + kMaxRecords * kRecordSize;
inline constexpr std::uint8_t kFlagEndOfWindow = 0x01;

struct EventPacket {
    std::uint8_t version = kVersion;
    std::uint8_t node_id = 0;
    std::uint8_t flags = 0;
    std::uint32_t sequence = 0;
    std::uint32_t window_id = 0;
    std::vector<DetectionEvent> records;

    bool end_of_window() const { return (flags & kFlagEndOfWindow) != 0; }

    friend bool operator==(const EventPacket&, const EventPacket&) = default;
};

enum class DecodeError {
    Truncated,            // shorter than the header or than the declared records
    BadMagic,
    BadVersion,
    RecordCountMismatch,  // trailing bytes, or record_count above kMaxRecords
};

std::string_view to_string(DecodeError e);

using DecodeResult = std::variant<EventPacket, DecodeError>;

/// Throws ValidationError if the packet holds more than kMaxRecords.
std::vector<std::uint8_t> encode(const EventPacket& packet);

DecodeResult decode_packet(std::span<const std::uint8_t> bytes);

/// Splits one window's events into packets of at most kMaxRecords; the last
/// packet carries the end-of-window flag. An empty window yields one empty
/// packet. Sequence numbers continue from `first_sequence`.
std::vector<EventPacket> encode_packets(std::span<const DetectionEvent> events, std::uint8_t node_id,
                                        std::uint32_t window_id, std::uint32_t first_sequence = 0);

/// Per-node packet stream: keeps the sequence counter across windows.
class PacketStreamEncoder {
public:
    explicit PacketStreamEncoder(std::uint8_t node_id, std::uint32_t first_sequence = 0)
        : node_id_(node_id), next_sequence_(first_sequence) {}

    std::vector<EventPacket> encode_window(std::span<const DetectionEvent> events, std::uint32_t window_id);

private:
    std::uint8_t node_id_;
    std::uint32_t next_sequence_;
};

/// What the reassembler observed about sequence order for one packet.
enum class SequenceStatus { InOrder, Gap, Reordered, Duplicate, First };

/// A window handed back by the reassembler.
struct ClosedWindow {
    std::uint8_t node_id = 0;
    std::uint32_t window_id = 0;
    /// Records sorted by (tick, channel).
    std::vector<DetectionEvent> events;
    std::size_t packets = 0;
    bool saw_end_marker = false;
};

/// Collects packets into windows, per node. Single owner; not thread-safe.
///
/// A window closes when its end-of-window packet arrives or when the caller
/// closes it explicitly (timeout). Packets for windows that already closed
/// are dropped and counted.
class WindowReassembler {
public:
    struct Stats {
        std::size_t packets = 0;
        std::size_t gaps = 0;
        std::size_t reordered = 0;
        std::size_t duplicates = 0;
        std::size_t late = 0;
    };

    /// Returns the sequence status of `packet` and, if it completed a
    /// window, that window.
    std::pair<SequenceStatus, std::optional<ClosedWindow>> accept(EventPacket packet);

    /// Closes an open window regardless of its end marker.
    std::optional<ClosedWindow> close(std::uint8_t node_id, std::uint32_t window_id);

    bool is_open(std::uint8_t node_id, std::uint32_t window_id) const;
    const Stats& stats() const { return stats_; }

private:
    struct NodeState {
        std::optional<std::uint32_t> highest_sequence;
        std::map<std::uint32_t, std::vector<EventPacket>> open;
        // Bounded memory of recently seen sequences and closed windows.
        std::set<std::uint32_t> recent_sequences;
        std::set<std::uint32_t> closed_windows;
    };

    ClosedWindow finish(std::uint8_t node_id, std::uint32_t window_id, std::vector<EventPacket> packets);

    std::map<std::uint8_t, NodeState> nodes_;
    Stats stats_;
};

}  // namespace qseal::wire
