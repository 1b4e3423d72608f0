// Copyright 2026 The Edgeplay Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "edgeplay/relay/socket.hpp"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <list>
#include <sstream>
#include <vector>

#include <httplib.h>

namespace edgeplay::relay {
namespace {

void set_nonblocking(int fd) { ::fcntl(fd, F_SETFL, ::fcntl(fd, F_GETFL, 0) | O_NONBLOCK); }

void set_nodelay(int fd) {
  int one = 1;
  ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
}

int local_port(int fd) {
  sockaddr_in addr{};
  socklen_t len = sizeof addr;
  if (::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len) != 0) return -1;
  return ntohs(addr.sin_port);
}

}  // namespace

Result<HostPort, std::string> parse_host_port(const std::string& text) {
  const auto colon = text.rfind(':');
  if (colon == std::string::npos) return unexpected("expected host:port, got '" + text + "'");
  HostPort hp{text.substr(0, colon), 0};
  const auto digits = text.substr(colon + 1);
  if (digits.empty() || digits.size() > 5 || digits.find_first_not_of("0123456789") != std::string::npos)
    return unexpected("bad port in '" + text + "'");
  hp.port = std::stoi(digits);
  if (hp.port > 65535) return unexpected("bad port in '" + text + "'");
  return hp;
}

// ---------------------------------------------------------------- server

struct RelayServer::Conn {
  int fd = -1;
  transport::StreamDecoder decoder;
  Bytes out;
  std::size_t out_pos = 0;
  bool closing = false;
  std::unique_ptr<Attachment> attachment;
};

struct RelayServer::Health {
  httplib::Server server;
  std::thread thread;
};

RelayServer::RelayServer(Relay& relay, const Clock& clock, Options opts)
    : relay_(relay), clock_(clock), opts_(std::move(opts)) {}

RelayServer::~RelayServer() { stop(); }

std::string RelayServer::health_text(const GlobalStats& s) {
  std::ostringstream o;
  o << "ok\n"
    << "rooms_open " << s.rooms_open << "\n"
    << "rooms_created " << s.rooms_created << "\n"
    << "rooms_expired " << s.rooms_expired << "\n"
    << "joins " << s.joins << "\n"
    << "rejected " << s.rejected << "\n";
  static constexpr const char* kLaneNames[] = {"control", "media", "signaling"};
  for (std::size_t i = 0; i < kLaneCount; ++i)
    o << "bytes_" << kLaneNames[i] << " " << s.relayed.bytes[i] << "\n"
      << "messages_" << kLaneNames[i] << " " << s.relayed.messages[i] << "\n";
  return o.str();
}

Result<void, std::string> RelayServer::start() {
  if (running_) return {};
  listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0) return unexpected(std::string("socket: ") + std::strerror(errno));
  int one = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(static_cast<std::uint16_t>(opts_.port));
  if (::inet_pton(AF_INET, opts_.host.empty() ? "0.0.0.0" : opts_.host.c_str(), &addr.sin_addr) != 1) {
    ::close(listen_fd_);
    return unexpected("bad listen address " + opts_.host);
  }
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0 || ::listen(listen_fd_, 64) != 0) {
    const std::string why = std::strerror(errno);
    ::close(listen_fd_);
    listen_fd_ = -1;
    return unexpected("listen on port " + std::to_string(opts_.port) + ": " + why);
  }
  set_nonblocking(listen_fd_);
  port_ = local_port(listen_fd_);
  if (::pipe(wake_) != 0) return unexpected(std::string("pipe: ") + std::strerror(errno));
  set_nonblocking(wake_[0]);
  set_nonblocking(wake_[1]);

  if (opts_.health_port >= 0) {
    health_ = std::make_unique<Health>();
    health_->server.Get("/health", [this](const httplib::Request&, httplib::Response& res) {
      res.set_content(health_text(relay_.stats()), "text/plain");
    });
    const std::string host = opts_.host.empty() ? "0.0.0.0" : opts_.host;
    if (opts_.health_port == 0) {
      health_port_ = health_->server.bind_to_any_port(host);
    } else {
      health_port_ = health_->server.bind_to_port(host, opts_.health_port) ? opts_.health_port : -1;
    }
    if (health_port_ < 0) {
      stop();
      return unexpected("cannot bind health port " + std::to_string(opts_.health_port));
    }
    health_->thread = std::thread([h = health_.get()] { h->server.listen_after_bind(); });
  }
  running_ = true;
  thread_ = std::thread([this] { loop(); });
  return {};
}

void RelayServer::stop() {
  if (running_.exchange(false)) {
    const char b = 1;
    (void)!::write(wake_[1], &b, 1);
    thread_.join();
  }
  if (health_) {
    health_->server.stop();
    if (health_->thread.joinable()) health_->thread.join();
    health_.reset();
  }
  for (int* fd : {&listen_fd_, &wake_[0], &wake_[1]})
    if (*fd >= 0) {
      ::close(*fd);
      *fd = -1;
    }
}

void RelayServer::drop(Conn& c) {
  if (c.attachment) c.attachment->detach();
  c.closing = true;
}

void RelayServer::loop() {
  std::list<Conn> conns;
  Millis next_expire = clock_.now_ms() + 1000;
  std::vector<pollfd> fds;
  std::vector<Conn*> order;
  std::uint8_t buf[64 * 1024];

  while (running_) {
    fds.clear();
    order.clear();
    fds.push_back({listen_fd_, POLLIN, 0});
    fds.push_back({wake_[0], POLLIN, 0});
    for (auto& c : conns) {
      short ev = POLLIN;
      if (c.out_pos < c.out.size()) ev |= POLLOUT;
      fds.push_back({c.fd, ev, 0});
      order.push_back(&c);
    }
    if (::poll(fds.data(), fds.size(), 200) < 0 && errno != EINTR) break;

    if (fds[1].revents & POLLIN)
      while (::read(wake_[0], buf, sizeof buf) > 0) {
      }
    if (fds[0].revents & POLLIN) {
      for (;;) {
        const int fd = ::accept(listen_fd_, nullptr, nullptr);
        if (fd < 0) break;
        set_nonblocking(fd);
        set_nodelay(fd);
        auto& c = conns.emplace_back();
        c.fd = fd;
        Conn* cp = &c;
        const std::size_t cap = opts_.max_backlog;
        // Sinks run on this thread: Relay calls them from forward(), which
        // only happens inside on_packet below.
        c.attachment = std::make_unique<Attachment>(
            relay_,
            [cp, cap](Lane lane, ByteView bytes) {
              if (cp->closing) return;
              if (cp->out.size() - cp->out_pos > cap) {
                cp->closing = true;
                return;
              }
              transport::append_stream_frame(cp->out, lane, bytes);
            },
            clock_);
        ++connections_;
      }
    }

    for (std::size_t i = 0; i < order.size(); ++i) {
      Conn& c = *order[i];
      const short re = fds[i + 2].revents;
      if (c.closing) continue;
      if (re & (POLLIN | POLLHUP | POLLERR)) {
        for (;;) {
          const ssize_t n = ::recv(c.fd, buf, sizeof buf, 0);
          if (n > 0) {
            auto pkts = c.decoder.feed(ByteView(buf, static_cast<std::size_t>(n)));
            if (!pkts) {
              drop(c);
              break;
            }
            for (auto& p : *pkts) c.attachment->on_packet(p.lane, p.data);
            continue;
          }
          if (n == 0 || (errno != EAGAIN && errno != EWOULDBLOCK && errno != EINTR)) drop(c);
          break;
        }
      }
    }
    // Flush every connection: forwarding above may have queued bytes for
    // members that were not polled for output.
    for (auto& c : conns) {
      while (!c.closing && c.out_pos < c.out.size()) {
        const ssize_t n = ::send(c.fd, c.out.data() + c.out_pos, c.out.size() - c.out_pos, MSG_NOSIGNAL);
        if (n > 0) {
          c.out_pos += static_cast<std::size_t>(n);
          continue;
        }
        if (n < 0 && (errno == EAGAIN || errno == EWOULDBLOCK || errno == EINTR)) break;
        drop(c);
      }
      if (c.out_pos == c.out.size()) {
        c.out.clear();
        c.out_pos = 0;
      } else if (c.out_pos > (1u << 20)) {
        c.out.erase(c.out.begin(), c.out.begin() + static_cast<std::ptrdiff_t>(c.out_pos));
        c.out_pos = 0;
      }
    }
    for (auto it = conns.begin(); it != conns.end();) {
      if (it->closing) {
        it->attachment.reset();
        ::close(it->fd);
        it = conns.erase(it);
        --connections_;
      } else {
        ++it;
      }
    }
    if (const Millis now = clock_.now_ms(); now >= next_expire) {
      relay_.expire(now);
      next_expire = now + 1000;
    }
  }
  for (auto& c : conns) {
    c.attachment.reset();
    ::close(c.fd);
  }
  connections_ = 0;
}

// ---------------------------------------------------------------- client

Result<std::unique_ptr<TcpLink>, std::string> TcpLink::connect(const std::string& host, int port, int timeout_ms) {
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  const std::string h = host.empty() ? "127.0.0.1" : host;
  if (const int rc = ::getaddrinfo(h.c_str(), std::to_string(port).c_str(), &hints, &res); rc != 0)
    return unexpected("resolve " + h + ": " + ::gai_strerror(rc));
  const int fd = ::socket(res->ai_family, res->ai_socktype, res->ai_protocol);
  if (fd < 0) {
    ::freeaddrinfo(res);
    return unexpected(std::string("socket: ") + std::strerror(errno));
  }
  set_nonblocking(fd);
  int rc = ::connect(fd, res->ai_addr, res->ai_addrlen);
  ::freeaddrinfo(res);
  if (rc != 0 && errno != EINPROGRESS) {
    const std::string why = std::strerror(errno);
    ::close(fd);
    return unexpected("connect " + h + ":" + std::to_string(port) + ": " + why);
  }
  if (rc != 0) {
    pollfd p{fd, POLLOUT, 0};
    rc = ::poll(&p, 1, timeout_ms);
    int err = 0;
    socklen_t len = sizeof err;
    ::getsockopt(fd, SOL_SOCKET, SO_ERROR, &err, &len);
    if (rc <= 0 || err != 0) {
      ::close(fd);
      return unexpected("connect " + h + ":" + std::to_string(port) + ": " +
                        (rc <= 0 ? std::string("timed out") : std::strerror(err)));
    }
  }
  set_nodelay(fd);
  return std::unique_ptr<TcpLink>(new TcpLink(fd));
}

TcpLink::~TcpLink() { close(); }

void TcpLink::close() {
  std::lock_guard lock(mu_);
  if (fd_ >= 0) ::close(fd_);
  fd_ = -1;
  open_ = false;
}

void TcpLink::pump_locked() {
  if (!open_) return;
  while (out_pos_ < out_.size()) {
    const ssize_t n = ::send(fd_, out_.data() + out_pos_, out_.size() - out_pos_, MSG_NOSIGNAL);
    if (n > 0) {
      out_pos_ += static_cast<std::size_t>(n);
      continue;
    }
    if (n < 0 && (errno == EAGAIN || errno == EWOULDBLOCK || errno == EINTR)) break;
    open_ = false;
    return;
  }
  if (out_pos_ == out_.size()) {
    out_.clear();
    out_pos_ = 0;
  }
  std::uint8_t buf[64 * 1024];
  for (;;) {
    const ssize_t n = ::recv(fd_, buf, sizeof buf, 0);
    if (n > 0) {
      auto pkts = decoder_.feed(ByteView(buf, static_cast<std::size_t>(n)));
      if (!pkts) {
        open_ = false;
        return;
      }
      for (auto& p : *pkts) in_.push_back(std::move(p));
      continue;
    }
    if (n == 0 || (errno != EAGAIN && errno != EWOULDBLOCK && errno != EINTR)) open_ = false;
    return;
  }
}

bool TcpLink::send(Lane lane, ByteView bytes) {
  std::lock_guard lock(mu_);
  if (!open_) return false;
  transport::append_stream_frame(out_, lane, bytes);
  pump_locked();
  return open_;
}

std::optional<transport::Packet> TcpLink::receive() {
  std::lock_guard lock(mu_);
  if (in_.empty()) pump_locked();
  if (in_.empty()) return std::nullopt;
  auto p = std::move(in_.front());
  in_.pop_front();
  return p;
}

bool TcpLink::is_open() const {
  std::lock_guard lock(mu_);
  return open_ || !in_.empty();
}

bool TcpLink::writable() const {
  std::lock_guard lock(mu_);
  return open_ && out_.size() - out_pos_ <= kHighWater;
}

}  // namespace edgeplay::relay
