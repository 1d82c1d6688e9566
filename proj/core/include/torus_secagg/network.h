// Copyright 2026 The torus_secagg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TORUS_SECAGG_NETWORK_H_
#define TORUS_SECAGG_NETWORK_H_

#include <cstdint>
#include <deque>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace torus_secagg {

// Endpoint 0 is the server; clients are 1..K.
inline constexpr int kServerEndpoint = 0;

// Symbol accounting for the simulated network. A symbol is one real number
// (or one field element) on the wire.
//
// Client cost counts every symbol on the client's pairwise links, in either
// direction, plus what it uploads to the server. Server cost counts what the
// server sends to clients.
class TrafficMeter {
 public:
  explicit TrafficMeter(int num_clients)
      : peer_(static_cast<std::size_t>(num_clients) + 1, 0),
        uplink_(static_cast<std::size_t>(num_clients) + 1, 0) {}

  void Record(int from, int to, std::uint64_t symbols) {
    if (from == kServerEndpoint) {
      downlink_ += symbols;
    } else if (to == kServerEndpoint) {
      uplink_.at(static_cast<std::size_t>(from)) += symbols;
    } else {
      peer_.at(static_cast<std::size_t>(from)) += symbols;
      peer_.at(static_cast<std::size_t>(to)) += symbols;
    }
  }

  int num_clients() const { return static_cast<int>(peer_.size()) - 1; }
  std::uint64_t peer_symbols(int k) const {
    return peer_.at(static_cast<std::size_t>(k));
  }
  std::uint64_t uplink_symbols(int k) const {
    return uplink_.at(static_cast<std::size_t>(k));
  }
  std::uint64_t client_symbols(int k) const {
    return peer_symbols(k) + uplink_symbols(k);
  }
  std::uint64_t server_symbols() const { return downlink_; }

 private:
  std::vector<std::uint64_t> peer_;
  std::vector<std::uint64_t> uplink_;
  std::uint64_t downlink_ = 0;
};

template <typename Payload>
struct Envelope {
  int from;
  int to;
  std::uint64_t symbols;
  std::shared_ptr<const Payload> payload;
};

// One FIFO inbox per endpoint. Payloads are immutable and shared, so a
// broadcast does not copy the vector K times.
template <typename Payload>
class Mailboxes {
 public:
  Mailboxes(int num_clients, TrafficMeter& meter)
      : inboxes_(static_cast<std::size_t>(num_clients) + 1), meter_(&meter) {}

  void Send(int from, int to, std::shared_ptr<const Payload> payload,
            std::uint64_t symbols) {
    if (to < 0 || static_cast<std::size_t>(to) >= inboxes_.size()) {
      throw std::out_of_range("Mailboxes: unknown endpoint " +
                              std::to_string(to));
    }
    meter_->Record(from, to, symbols);
    inboxes_[static_cast<std::size_t>(to)].push_back(
        {from, to, symbols, std::move(payload)});
  }

  std::vector<Envelope<Payload>> Drain(int endpoint) {
    auto& box = inboxes_.at(static_cast<std::size_t>(endpoint));
    std::vector<Envelope<Payload>> out(box.begin(), box.end());
    box.clear();
    return out;
  }

 private:
  std::vector<std::deque<Envelope<Payload>>> inboxes_;
  TrafficMeter* meter_;
};

}  // namespace torus_secagg

#endif  // TORUS_SECAGG_NETWORK_H_
