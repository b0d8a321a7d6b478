#pragma once

// Client side of the harness: direct access to one node, and the unknown-
// latency accelerated access that races all n nodes and stops at node t's
// response or at the k-th response from the other nodes.

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mdsaccel/errors.hpp"
#include "mdsaccel/mds_codec.hpp"
#include "mdsaccel/net/protocol.hpp"
#include "mdsaccel/net/socket.hpp"
#include "mdsaccel/strategy.hpp"

namespace mdsaccel::net {

struct FetchResult {
  Column data;
  std::chrono::nanoseconds wall_latency{0};
  AccessPath path = AccessPath::Direct;
  std::vector<std::size_t> nodes_used;

  double wall_ms() const { return std::chrono::duration<double, std::milli>(wall_latency).count(); }
};

struct FetchOptions {
  std::chrono::milliseconds timeout{10000};
};

namespace detail {

// One in-flight request: connect, send the GET, read the response.
class Exchange {
 public:
  enum class State { Connecting, Reading, Done, Failed };

  Exchange(std::size_t node_id, const Endpoint& ep) : node_id_(node_id) {
    try {
      fd_ = start_connect(ep);
    } catch (const SocketError& e) {
      fail(e.what());
      return;
    }
    if (!fd_.valid()) fail("connect to " + ep.to_string() + " failed");
  }

  std::size_t node_id() const noexcept { return node_id_; }
  State state() const noexcept { return state_; }
  bool active() const noexcept { return state_ == State::Connecting || state_ == State::Reading; }
  const std::string& error() const noexcept { return error_; }
  Column take_payload() { return std::move(payload_); }

  short poll_events() const { return state_ == State::Connecting ? POLLOUT : POLLIN; }
  int fd() const noexcept { return fd_.get(); }

  void on_ready(short revents) {
    if (state_ == State::Connecting) {
      const int err = connect_result(fd_.get());
      if (err != 0) {
        errno = err;
        return fail(errno_text("connect"));
      }
      const auto req = encode_request(node_id_);
      if (!send_all(fd_.get(), req, Clock::now() + std::chrono::seconds(1))) return fail("send failed");
      state_ = State::Reading;
      return;
    }
    if (!(revents & (POLLIN | POLLHUP | POLLERR))) return;
    std::uint8_t buf[4096];
    while (true) {
      const ssize_t r = ::recv(fd_.get(), buf, sizeof buf, 0);
      if (r > 0) {
        consume(std::span(buf, static_cast<std::size_t>(r)));
        if (!active()) return;
        continue;
      }
      if (r < 0 && errno == EINTR) continue;
      if (r < 0 && (errno == EAGAIN || errno == EWOULDBLOCK)) return;
      return fail(r == 0 ? "connection closed before the response completed" : errno_text("recv"));
    }
  }

 private:
  void consume(std::span<const std::uint8_t> bytes) {
    for (std::uint8_t b : bytes) {
      if (header_.size() < kResponseHeaderSize) {
        header_.push_back(b);
        if (header_.size() == kResponseHeaderSize) {
          const auto h = parse_response_header(std::span<const std::uint8_t, kResponseHeaderSize>(header_.data(),
                                                                                                   kResponseHeaderSize));
          status_ = h.status;
          expected_ = h.length;
          payload_.reserve(expected_);
          if (expected_ == 0) finish();
        }
        continue;
      }
      payload_.push_back(b);
      if (payload_.size() == expected_) return finish();
    }
  }

  void finish() {
    if (status_ == kStatusOk) {
      state_ = State::Done;
      fd_.reset();
      return;
    }
    fail("node " + std::to_string(node_id_) + " replied with error: " + std::string(payload_.begin(), payload_.end()));
  }

  void fail(std::string why) {
    state_ = State::Failed;
    error_ = std::move(why);
    fd_.reset();
  }

  std::size_t node_id_;
  Fd fd_;
  State state_ = State::Connecting;
  std::string error_;
  std::vector<std::uint8_t> header_;
  std::uint8_t status_ = kStatusError;
  std::uint32_t expected_ = 0;
  Column payload_;
};

inline FetchError insufficient(const std::string& why) { return FetchError(FetchError::Kind::Insufficient, why); }

}  // namespace detail

/// Reads node t's column from node t alone. endpoints[i] serves node i+1.
inline FetchResult fetch_da(std::span<const Endpoint> endpoints, std::size_t t, const FetchOptions& opts = {}) {
  if (t < 1 || t > endpoints.size())
    throw RequestError("target node " + std::to_string(t) + " has no endpoint");
  const auto start = Clock::now();
  const auto deadline = start + opts.timeout;
  detail::Exchange ex(t, endpoints[t - 1]);
  while (ex.active()) {
    pollfd p{ex.fd(), ex.poll_events(), 0};
    const int wait = millis_until(deadline);
    if (wait == 0) throw FetchError(FetchError::Kind::Timeout, "node " + std::to_string(t) + " timed out");
    const int rc = ::poll(&p, 1, wait);
    if (rc < 0 && errno == EINTR) continue;
    if (rc < 0) throw FetchError(FetchError::Kind::Connect, errno_text("poll"));
    if (rc > 0) ex.on_ready(p.revents);
  }
  if (ex.state() == detail::Exchange::State::Failed)
    throw FetchError(FetchError::Kind::Connect, "node " + std::to_string(t) + ": " + ex.error());
  FetchResult out;
  out.data = ex.take_payload();
  out.wall_latency = Clock::now() - start;
  out.path = AccessPath::Direct;
  out.nodes_used = {t};
  return out;
}

/// Starts all n reads at once; returns at node t's response or, once k other
/// nodes have answered, with node t's column recovered from theirs. Every
/// outstanding connection is closed on return. Partial responses are never used.
inline FetchResult fetch_aaul(std::span<const Endpoint> endpoints, const CodeParams& params, std::size_t t,
                              const FetchOptions& opts = {}) {
  if (endpoints.size() != params.n())
    throw RequestError("expected " + std::to_string(params.n()) + " endpoints, got " +
                       std::to_string(endpoints.size()));
  if (t < 1 || t > params.k()) throw RequestError("target " + std::to_string(t) + " is not a data node");

  const auto start = Clock::now();
  const auto deadline = start + opts.timeout;
  std::vector<detail::Exchange> exchanges;
  exchanges.reserve(params.n());
  for (std::size_t i = 0; i < params.n(); ++i) exchanges.emplace_back(i + 1, endpoints[i]);

  NodeColumns finished;
  auto outcome = [&]() -> std::optional<FetchResult> {
    // Completion order within one poll round follows node id, as in the
    // simulated strategy's tie-break.
    for (auto& ex : exchanges) {
      if (ex.state() != detail::Exchange::State::Done) continue;
      const std::size_t id = ex.node_id();
      bool seen = id == t;
      for (std::size_t f : finished.ids) seen = seen || f == id;
      if (id == t) {
        Column col = ex.take_payload();
        if (col.size() != params.m()) throw FetchError(FetchError::Kind::Protocol, "node t returned wrong length");
        return FetchResult{std::move(col), Clock::now() - start, AccessPath::Direct, {t}};
      }
      if (seen) continue;
      Column col = ex.take_payload();
      if (col.size() != params.m()) continue;  // treated as a failed node
      finished.ids.push_back(id);
      finished.columns.push_back(std::move(col));
      if (finished.ids.size() == params.k()) {
        Column data = Codec(params).recover_node(finished, t);
        const auto elapsed = Clock::now() - start;
        auto used = finished.ids;
        std::sort(used.begin(), used.end());
        return FetchResult{std::move(data), elapsed, AccessPath::Decoded, std::move(used)};
      }
    }
    return std::nullopt;
  };

  std::vector<pollfd> fds;
  std::vector<std::size_t> owners;
  while (true) {
    if (auto done = outcome()) return std::move(*done);

    std::size_t live_others = 0;
    bool target_live = false;
    fds.clear();
    owners.clear();
    for (std::size_t i = 0; i < exchanges.size(); ++i) {
      if (!exchanges[i].active()) continue;
      if (exchanges[i].node_id() == t)
        target_live = true;
      else
        ++live_others;
      fds.push_back({exchanges[i].fd(), exchanges[i].poll_events(), 0});
      owners.push_back(i);
    }
    if (!target_live && finished.ids.size() + live_others < params.k())
      throw detail::insufficient("only " + std::to_string(finished.ids.size() + live_others) +
                                 " nodes other than the target can still respond; need " +
                                 std::to_string(params.k()));

    const int wait = millis_until(deadline);
    if (wait == 0)
      throw detail::insufficient("deadline passed with " + std::to_string(finished.ids.size()) + " of " +
                                 std::to_string(params.k()) + " responses");
    const int rc = ::poll(fds.data(), fds.size(), wait);
    if (rc < 0 && errno == EINTR) continue;
    if (rc < 0) throw FetchError(FetchError::Kind::Connect, errno_text("poll"));
    for (std::size_t j = 0; j < fds.size(); ++j)
      if (fds[j].revents) exchanges[owners[j]].on_ready(fds[j].revents);
  }
}

}  // namespace mdsaccel::net
