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

// Minimal IPv4 UDP socket over POSIX.

#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qseal::net {

class UdpSocket {
public:
    UdpSocket();
    ~UdpSocket();
    UdpSocket(UdpSocket&& other) noexcept;
    UdpSocket& operator=(UdpSocket&& other) noexcept;
    UdpSocket(const UdpSocket&) = delete;
    UdpSocket& operator=(const UdpSocket&) = delete;

    /// Port 0 picks an ephemeral port; see local_port(). IoError on failure.
    void bind(const std::string& host, std::uint16_t port);
    /// Fixes the peer so that ICMP unreachable errors are reported back.
    void connect(const std::string& host, std::uint16_t port);

    std::uint16_t local_port() const;

    /// Sends one datagram to the connected peer. Returns false if the peer
    /// has reported itself unreachable (now or on an earlier datagram).
    bool send(std::span<const std::uint8_t> data);

    /// Waits up to `timeout` for a datagram. Returns nullopt on timeout.
    std::optional<std::vector<std::uint8_t>> receive(std::chrono::milliseconds timeout);

    /// Clears and reports a pending asynchronous error (e.g. ECONNREFUSED).
    bool peer_unreachable();

private:
    int fd_ = -1;
};

}  // namespace qseal::net
