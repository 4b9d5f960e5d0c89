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

#include "qseal/udp.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <utility>

#include "qseal/error.hpp"
#include "qseal/packet.hpp"

namespace qseal::net {

namespace {

sockaddr_in make_address(const std::string& host, std::uint16_t port) {
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    const std::string h = host == "localhost" ? "127.0.0.1" : host;
    if (::inet_pton(AF_INET, h.c_str(), &addr.sin_addr) != 1) {
        throw IoError("invalid IPv4 address '" + host + "'");
    }
    return addr;
}

[[noreturn]] void fail(const std::string& what) { throw IoError(what + ": " + std::strerror(errno)); }

}  // namespace

UdpSocket::UdpSocket() {
    fd_ = ::socket(AF_INET, SOCK_DGRAM, 0);
    if (fd_ < 0) {
        fail("socket");
    }
    int size = 8 << 20;
    ::setsockopt(fd_, SOL_SOCKET, SO_RCVBUF, &size, sizeof size);
    ::setsockopt(fd_, SOL_SOCKET, SO_SNDBUF, &size, sizeof size);
}

UdpSocket::~UdpSocket() {
    if (fd_ >= 0) {
        ::close(fd_);
    }
}

UdpSocket::UdpSocket(UdpSocket&& other) noexcept : fd_(std::exchange(other.fd_, -1)) {}

UdpSocket& UdpSocket::operator=(UdpSocket&& other) noexcept {
    if (this != &other) {
        if (fd_ >= 0) {
            ::close(fd_);
        }
        fd_ = std::exchange(other.fd_, -1);
    }
    return *this;
}

void UdpSocket::bind(const std::string& host, std::uint16_t port) {
    const auto addr = make_address(host, port);
    if (::bind(fd_, reinterpret_cast<const sockaddr*>(&addr), sizeof addr) != 0) {
        fail("bind " + host + ":" + std::to_string(port));
    }
}

void UdpSocket::connect(const std::string& host, std::uint16_t port) {
    const auto addr = make_address(host, port);
    if (::connect(fd_, reinterpret_cast<const sockaddr*>(&addr), sizeof addr) != 0) {
        fail("connect " + host + ":" + std::to_string(port));
    }
}

std::uint16_t UdpSocket::local_port() const {
    sockaddr_in addr{};
    socklen_t len = sizeof addr;
    if (::getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len) != 0) {
        fail("getsockname");
    }
    return ntohs(addr.sin_port);
}

bool UdpSocket::peer_unreachable() {
    int err = 0;
    socklen_t len = sizeof err;
    if (::getsockopt(fd_, SOL_SOCKET, SO_ERROR, &err, &len) != 0) {
        fail("getsockopt");
    }
    return err == ECONNREFUSED || err == EHOSTUNREACH || err == ENETUNREACH;
}

bool UdpSocket::send(std::span<const std::uint8_t> data) {
    for (;;) {
        const auto n = ::send(fd_, data.data(), data.size(), 0);
        if (n >= 0) {
            return !peer_unreachable();
        }
        if (errno == EINTR) {
            continue;
        }
        if (errno == ECONNREFUSED || errno == EHOSTUNREACH || errno == ENETUNREACH) {
            return false;
        }
        if (errno == ENOBUFS || errno == EAGAIN) {
            ::usleep(100);
            continue;
        }
        fail("send");
    }
}

std::optional<std::vector<std::uint8_t>> UdpSocket::receive(std::chrono::milliseconds timeout) {
    pollfd pfd{fd_, POLLIN, 0};
    const int ready = ::poll(&pfd, 1, static_cast<int>(timeout.count()));
    if (ready < 0) {
        if (errno == EINTR) {
            return std::nullopt;
        }
        fail("poll");
    }
    if (ready == 0) {
        return std::nullopt;
    }
    // One byte more than the largest valid packet so oversize datagrams are
    // seen as such rather than silently truncated to a valid length.
    std::vector<std::uint8_t> buf(wire::kMaxPacketSize + 1);
    const auto n = ::recv(fd_, buf.data(), buf.size(), 0);
    if (n < 0) {
        if (errno == EINTR || errno == EAGAIN || errno == ECONNREFUSED) {
            return std::nullopt;
        }
        fail("recv");
    }
    buf.resize(static_cast<std::size_t>(n));
    return buf;
}

}  // namespace qseal::net
