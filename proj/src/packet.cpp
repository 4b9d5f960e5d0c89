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

#include "qseal/packet.hpp"

#include <algorithm>

#include "qseal/error.hpp"

namespace qseal::wire {

namespace {

constexpr std::uint8_t kMagic[4] = {0x51, 0x53, 0x4C, 0x31};
constexpr std::size_t kRecentLimit = 4096;

template <class T>
std::uint8_t* put_be(std::uint8_t* out, T value) {
    for (int shift = 8 * (static_cast<int>(sizeof(T)) - 1); shift >= 0; shift -= 8) {
        *out++ = static_cast<std::uint8_t>(value >> shift);
    }
    return out;
}

template <class T>
T get_be(const std::uint8_t* p) {
    T v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
        v = static_cast<T>((v << 8) | p[i]);
    }
    return v;
}

void trim(std::set<std::uint32_t>& s) {
    while (s.size() > kRecentLimit) {
        s.erase(s.begin());
    }
}

}  // namespace

std::string_view to_string(DecodeError e) {
    switch (e) {
        case DecodeError::Truncated: return "truncated";
        case DecodeError::BadMagic: return "bad_magic";
        case DecodeError::BadVersion: return "bad_version";
        case DecodeError::RecordCountMismatch: return "record_count_mismatch";
    }
    return "unknown";
}

std::vector<std::uint8_t> encode(const EventPacket& packet) {
    if (packet.records.size() > kMaxRecords) {
        throw ValidationError("packet holds more than 1000 records");
    }
    std::vector<std::uint8_t> out(kHeaderSize + packet.records.size() * kRecordSize);
    std::uint8_t* p = std::copy(std::begin(kMagic), std::end(kMagic), out.data());
    *p++ = packet.version;
    *p++ = packet.node_id;
    *p++ = packet.flags;
    p = put_be(p, static_cast<std::uint16_t>(packet.records.size()));
    p = put_be(p, packet.sequence);
    p = put_be(p, packet.window_id);
    for (const auto& r : packet.records) {
        *p++ = r.channel;
        p = put_be(p, r.tick);
    }
    return out;
}

DecodeResult decode_packet(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < kHeaderSize) {
        return DecodeError::Truncated;
    }
    const std::uint8_t* p = bytes.data();
    if (!std::equal(std::begin(kMagic), std::end(kMagic), p)) {
        return DecodeError::BadMagic;
    }
    if (p[4] != kVersion) {
        return DecodeError::BadVersion;
    }
    EventPacket packet;
    packet.version = p[4];
    packet.node_id = p[5];
    packet.flags = p[6];
    const std::size_t count = get_be<std::uint16_t>(p + 7);
    packet.sequence = get_be<std::uint32_t>(p + 9);
    packet.window_id = get_be<std::uint32_t>(p + 13);
    if (count > kMaxRecords) {
        return DecodeError::RecordCountMismatch;
    }
    const std::size_t need = kHeaderSize + count * kRecordSize;
    if (bytes.size() < need) {
        return DecodeError::Truncated;
    }
    if (bytes.size() > need) {
        return DecodeError::RecordCountMismatch;
    }
    packet.records.resize(count);
    const std::uint8_t* r = p + kHeaderSize;
    for (auto& rec : packet.records) {
        rec.channel = r[0];
        rec.tick = get_be<std::uint64_t>(r + 1);
        r += kRecordSize;
    }
    return packet;
}

std::vector<EventPacket> encode_packets(std::span<const DetectionEvent> events, std::uint8_t node_id,
                                        std::uint32_t window_id, std::uint32_t first_sequence) {
    std::vector<EventPacket> packets;
    std::uint32_t seq = first_sequence;
    std::size_t pos = 0;
    do {
        const std::size_t n = std::min(kMaxRecords, events.size() - pos);
        EventPacket pk;
        pk.node_id = node_id;
        pk.sequence = seq++;
        pk.window_id = window_id;
        pk.records.assign(events.begin() + static_cast<std::ptrdiff_t>(pos),
                          events.begin() + static_cast<std::ptrdiff_t>(pos + n));
        pos += n;
        packets.push_back(std::move(pk));
    } while (pos < events.size());
    packets.back().flags |= kFlagEndOfWindow;
    return packets;
}

std::vector<EventPacket> PacketStreamEncoder::encode_window(std::span<const DetectionEvent> events,
                                                            std::uint32_t window_id) {
    auto packets = encode_packets(events, node_id_, window_id, next_sequence_);
    next_sequence_ += static_cast<std::uint32_t>(packets.size());
    return packets;
}

std::pair<SequenceStatus, std::optional<ClosedWindow>> WindowReassembler::accept(EventPacket packet) {
    ++stats_.packets;
    auto& node = nodes_[packet.node_id];

    SequenceStatus status = SequenceStatus::InOrder;
    if (node.recent_sequences.contains(packet.sequence)) {
        ++stats_.duplicates;
        return {SequenceStatus::Duplicate, std::nullopt};
    }
    if (!node.highest_sequence) {
        status = SequenceStatus::First;
        node.highest_sequence = packet.sequence;
    } else if (packet.sequence == *node.highest_sequence + 1) {
        node.highest_sequence = packet.sequence;
    } else if (packet.sequence > *node.highest_sequence) {
        status = SequenceStatus::Gap;
        ++stats_.gaps;
        node.highest_sequence = packet.sequence;
    } else {
        status = SequenceStatus::Reordered;
        ++stats_.reordered;
    }
    node.recent_sequences.insert(packet.sequence);
    trim(node.recent_sequences);

    if (node.closed_windows.contains(packet.window_id)) {
        ++stats_.late;
        return {status, std::nullopt};
    }

    const std::uint8_t node_id = packet.node_id;
    const std::uint32_t window_id = packet.window_id;
    const bool end = packet.end_of_window();
    auto& bucket = node.open[window_id];
    bucket.push_back(std::move(packet));
    if (!end) {
        return {status, std::nullopt};
    }
    auto packets = std::move(bucket);
    node.open.erase(window_id);
    return {status, finish(node_id, window_id, std::move(packets))};
}

std::optional<ClosedWindow> WindowReassembler::close(std::uint8_t node_id, std::uint32_t window_id) {
    auto& node = nodes_[node_id];
    auto it = node.open.find(window_id);
    if (it == node.open.end()) {
        if (node.closed_windows.contains(window_id)) {
            return std::nullopt;
        }
        return finish(node_id, window_id, {});
    }
    auto packets = std::move(it->second);
    node.open.erase(it);
    return finish(node_id, window_id, std::move(packets));
}

bool WindowReassembler::is_open(std::uint8_t node_id, std::uint32_t window_id) const {
    auto it = nodes_.find(node_id);
    return it != nodes_.end() && it->second.open.contains(window_id);
}

ClosedWindow WindowReassembler::finish(std::uint8_t node_id, std::uint32_t window_id,
                                       std::vector<EventPacket> packets) {
    auto& node = nodes_[node_id];
    node.closed_windows.insert(window_id);
    trim(node.closed_windows);

    std::sort(packets.begin(), packets.end(),
              [](const EventPacket& a, const EventPacket& b) { return a.sequence < b.sequence; });
    ClosedWindow w;
    w.node_id = node_id;
    w.window_id = window_id;
    w.packets = packets.size();
    for (auto& p : packets) {
        w.saw_end_marker = w.saw_end_marker || p.end_of_window();
        w.events.insert(w.events.end(), p.records.begin(), p.records.end());
    }
    std::stable_sort(w.events.begin(), w.events.end(), sim::event_less);
    return w;
}

}  // namespace qseal::wire
