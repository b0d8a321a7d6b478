#pragma once

// A storage node serving one shard over the wire protocol, with an injected
// per-request delay. The delay is slept before the response is written and is
// interrupted when the client hangs up, which is how cancellation shows up on
// the server side.

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <list>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include <json.hpp>

#include "mdsaccel/latency_model.hpp"
#include "mdsaccel/net/protocol.hpp"
#include "mdsaccel/net/socket.hpp"
#include "mdsaccel/rng.hpp"
#include "mdsaccel/shard_format.hpp"

namespace mdsaccel::net {

struct FixedDelay {
  std::chrono::microseconds delay{0};
};

/// Delay drawn per request from a latency model, one time unit = 1 ms.
/// Request i (counted from 0) uses the stream SeededRng(seed ^ i).
struct ModelDelay {
  NodeLatency model;
  std::uint64_t seed = 1;
};

using DelaySource = std::variant<FixedDelay, ModelDelay>;

struct NodeServerConfig {
  std::size_t node_id = 1;
  Endpoint listen{"127.0.0.1", 0};
  std::filesystem::path shard_path;
  DelaySource delay = FixedDelay{};
  std::optional<std::filesystem::path> log_path;  // JSON lines, appended
};

struct RequestLogEntry {
  std::size_t node;      // node id named in the request (0 if unparseable)
  double recv_at_ms;     // wall clock, ms since the Unix epoch
  bool replied;          // true once a complete ok response was written
  std::string outcome;   // "ok", "cancelled", "error"
};

inline nlohmann::ordered_json to_json(const RequestLogEntry& e) {
  nlohmann::ordered_json j;
  j["node"] = e.node;
  j["recv_at"] = e.recv_at_ms;
  j["replied"] = e.replied;
  j["outcome"] = e.outcome;
  return j;
}

class NodeServer {
 public:
  explicit NodeServer(NodeServerConfig config) : config_(std::move(config)) {
    shard_ = load_shard(config_.shard_path);
    if (shard_->node_id != config_.node_id)
      throw InvalidParams("shard " + config_.shard_path.string() + " belongs to node " +
                          std::to_string(shard_->node_id) + ", not node " + std::to_string(config_.node_id));
    if (const auto* m = std::get_if<ModelDelay>(&config_.delay)) validate(m->model);
    if (config_.log_path) {
      log_file_.open(*config_.log_path, std::ios::app);
      if (!log_file_) throw InvalidParams("cannot open request log " + config_.log_path->string());
    }
    int pipe_fds[2];
    if (::pipe2(pipe_fds, O_CLOEXEC) < 0) throw SocketError(errno_text("pipe"));
    wake_read_ = Fd(pipe_fds[0]);
    wake_write_ = Fd(pipe_fds[1]);
    listener_ = listen_on(config_.listen);
    port_ = local_port(listener_.get());
    acceptor_ = std::thread([this] { accept_loop(); });
  }

  NodeServer(const NodeServer&) = delete;
  NodeServer& operator=(const NodeServer&) = delete;

  ~NodeServer() { stop(); }

  std::uint16_t port() const noexcept { return port_; }
  Endpoint endpoint() const { return Endpoint{config_.listen.host, port_}; }
  std::size_t node_id() const noexcept { return config_.node_id; }

  std::vector<RequestLogEntry> request_log() const {
    std::lock_guard lock(log_mu_);
    return log_;
  }

  /// Stops accepting, wakes every in-flight handler, and joins them.
  void stop() {
    if (stopping_.exchange(true)) return;
    const std::uint8_t byte = 1;
    [[maybe_unused]] auto w = ::write(wake_write_.get(), &byte, 1);
    if (acceptor_.joinable()) acceptor_.join();
    std::lock_guard lock(workers_mu_);
    for (auto& w : workers_)
      if (w.thread.joinable()) w.thread.join();
    workers_.clear();
  }

 private:
  struct Worker {
    std::thread thread;
    std::shared_ptr<std::atomic<bool>> done;
  };

  void accept_loop() {
    while (!stopping_) {
      pollfd fds[2] = {{listener_.get(), POLLIN, 0}, {wake_read_.get(), POLLIN, 0}};
      if (::poll(fds, 2, -1) < 0) {
        if (errno == EINTR) continue;
        return;
      }
      if (fds[1].revents) return;
      if (!(fds[0].revents & POLLIN)) continue;
      Fd client(::accept4(listener_.get(), nullptr, nullptr, SOCK_CLOEXEC));
      if (!client.valid()) continue;
      set_nodelay(client.get());
      const std::uint64_t request_index = requests_++;

      std::lock_guard lock(workers_mu_);
      reap_finished();
      auto done = std::make_shared<std::atomic<bool>>(false);
      workers_.push_back(Worker{std::thread([this, done, request_index, c = std::move(client)]() mutable {
                                  handle(std::move(c), request_index);
                                  done->store(true);
                                }),
                                done});
    }
  }

  void reap_finished() {
    for (auto it = workers_.begin(); it != workers_.end();) {
      if (it->done->load()) {
        it->thread.join();
        it = workers_.erase(it);
      } else {
        ++it;
      }
    }
  }

  std::chrono::microseconds delay_for(std::uint64_t request_index) const {
    if (const auto* f = std::get_if<FixedDelay>(&config_.delay)) return f->delay;
    const auto& m = std::get<ModelDelay>(config_.delay);
    SeededRng rng(m.seed ^ request_index);
    const double units = sample(m.model, rng);
    return std::chrono::microseconds(static_cast<std::int64_t>(units * 1000.0));
  }

  // Waits until the deadline; false if the peer hung up or the server is stopping.
  bool wait_out(int fd, Clock::time_point until) const {
    while (true) {
      const int wait = millis_until(until);
      if (wait == 0) {
        if (Clock::now() >= until) return true;
      }
      pollfd fds[2] = {{fd, POLLIN, 0}, {wake_read_.get(), POLLIN, 0}};
      const int rc = ::poll(fds, 2, std::max(wait, 1));
      if (rc < 0 && errno == EINTR) continue;
      if (rc < 0) return false;
      if (fds[1].revents) return false;
      if (fds[0].revents & (POLLIN | POLLHUP | POLLERR)) {
        std::uint8_t probe;
        const ssize_t r = ::recv(fd, &probe, 1, MSG_PEEK | MSG_DONTWAIT);
        if (r <= 0 && !(r < 0 && (errno == EAGAIN || errno == EINTR))) return false;
        // Stray bytes after the request are ignored; drain them.
        if (r > 0) ::recv(fd, &probe, 1, MSG_DONTWAIT);
      }
      if (Clock::now() >= until) return true;
    }
  }

  bool read_request(int fd, RequestBytes& req, Clock::time_point deadline) const {
    std::size_t got = 0;
    while (got < req.size()) {
      pollfd fds[2] = {{fd, POLLIN, 0}, {wake_read_.get(), POLLIN, 0}};
      const int wait = millis_until(deadline);
      if (wait == 0) return false;
      const int rc = ::poll(fds, 2, wait);
      if (rc < 0 && errno == EINTR) continue;
      if (rc <= 0 || fds[1].revents) return false;
      const ssize_t r = ::recv(fd, req.data() + got, req.size() - got, 0);
      if (r <= 0) return false;
      got += static_cast<std::size_t>(r);
    }
    return true;
  }

  void handle(Fd client, std::uint64_t request_index) {
    set_nonblocking(client.get());
    const double recv_at = std::chrono::duration<double, std::milli>(
                               std::chrono::system_clock::now().time_since_epoch())
                               .count();
    RequestBytes req{};
    if (!read_request(client.get(), req, Clock::now() + std::chrono::seconds(5))) {
      record({0, recv_at, false, "error"});
      return;
    }
    const auto requested = parse_request(req);
    if (!requested || *requested != config_.node_id) {
      const std::string msg = !requested ? "malformed request"
                                         : "this server holds node " + std::to_string(config_.node_id) +
                                               ", not node " + std::to_string(*requested);
      send_all(client.get(), encode_error(msg), Clock::now() + std::chrono::seconds(5));
      record({requested.value_or(0), recv_at, false, "error"});
      return;
    }
    if (!wait_out(client.get(), Clock::now() + delay_for(request_index))) {
      record({*requested, recv_at, false, "cancelled"});
      return;
    }
    const bool ok = send_all(client.get(), encode_response(kStatusOk, shard_->symbols),
                             Clock::now() + std::chrono::seconds(5));
    record({*requested, recv_at, ok, ok ? "ok" : "cancelled"});
  }

  void record(RequestLogEntry entry) {
    std::lock_guard lock(log_mu_);
    if (log_file_.is_open()) log_file_ << to_json(entry).dump() << '\n' << std::flush;
    log_.push_back(std::move(entry));
  }

  NodeServerConfig config_;
  std::optional<Shard> shard_;
  Fd listener_;
  Fd wake_read_;
  Fd wake_write_;
  std::uint16_t port_ = 0;
  std::atomic<bool> stopping_{false};
  std::atomic<std::uint64_t> requests_{0};
  std::thread acceptor_;
  std::mutex workers_mu_;
  std::list<Worker> workers_;
  mutable std::mutex log_mu_;
  std::vector<RequestLogEntry> log_;
  std::ofstream log_file_;
};

inline std::unique_ptr<NodeServer> serve_node(NodeServerConfig config) {
  return std::make_unique<NodeServer>(std::move(config));
}

}  // namespace mdsaccel::net
