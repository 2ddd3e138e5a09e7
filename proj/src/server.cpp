#include "posewire/server.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <sys/time.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <deque>

#include "posewire/log.hpp"

namespace posewire::stream {

namespace {

std::string errno_text() { return std::strerror(errno); }

bool send_all(int fd, const std::uint8_t* data, std::size_t size) {
  while (size > 0) {
    const ssize_t n = ::send(fd, data, size, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      return false;
    }
    data += n;
    size -= static_cast<std::size_t>(n);
  }
  return true;
}

struct AddrInfoDeleter {
  void operator()(addrinfo* p) const { ::freeaddrinfo(p); }
};
using AddrInfoPtr = std::unique_ptr<addrinfo, AddrInfoDeleter>;

AddrInfoPtr resolve(const Endpoint& ep, bool passive) {
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  if (passive) hints.ai_flags = AI_PASSIVE;
  addrinfo* res = nullptr;
  const std::string port = std::to_string(ep.port);
  const int rc = ::getaddrinfo(ep.host.empty() ? nullptr : ep.host.c_str(), port.c_str(), &hints, &res);
  if (rc != 0) throw StreamError("cannot resolve " + ep.host + ": " + ::gai_strerror(rc));
  return AddrInfoPtr(res);
}

std::string describe(const Endpoint& ep) { return ep.host + ":" + std::to_string(ep.port); }

}  // namespace

Endpoint parse_endpoint(const std::string& text) {
  const auto colon = text.rfind(':');
  if (colon == std::string::npos || colon + 1 == text.size()) {
    throw std::invalid_argument("endpoint must be host:port, got '" + text + "'");
  }
  Endpoint ep;
  if (colon > 0) ep.host = text.substr(0, colon);
  const std::string port = text.substr(colon + 1);
  std::size_t used = 0;
  unsigned long value = 0;
  try {
    value = std::stoul(port, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != port.size() || value > 65535) throw std::invalid_argument("bad port in endpoint '" + text + "'");
  ep.port = static_cast<std::uint16_t>(value);
  return ep;
}

struct PoseServer::Subscriber {
  int fd = -1;
  std::string peer;
  std::mutex m;
  std::condition_variable cv;
  std::deque<std::shared_ptr<const wire::FrameBytes>> queue;
  bool finishing = false;  // drain the queue, then close
  bool aborted = false;    // close now, discard the queue
  bool write_failed = false;
  bool done = false;       // writer thread has exited
  std::thread writer;

  bool live() const { return !aborted && !done && !finishing; }

  void abort() {
    aborted = true;
    queue.clear();
    ::shutdown(fd, SHUT_RDWR);  // unblocks a writer stuck in send()
    cv.notify_all();
  }

  void run(std::condition_variable& server_changed) {
    for (;;) {
      std::shared_ptr<const wire::FrameBytes> next;
      {
        std::unique_lock lock(m);
        cv.wait(lock, [&] { return aborted || finishing || !queue.empty(); });
        if (aborted || queue.empty()) break;
        next = std::move(queue.front());
        queue.pop_front();
      }
      if (!send_all(fd, next->data(), next->size())) {
        std::lock_guard lock(m);
        if (!aborted) {
          write_failed = true;
          log::info("subscriber " + peer + " write failed: " + errno_text());
        }
        break;
      }
    }
    {
      std::lock_guard lock(m);
      done = true;
    }
    ::shutdown(fd, SHUT_RDWR);
    cv.notify_all();
    server_changed.notify_all();
  }
};

PoseServer::PoseServer(ServerOptions options) : options_(std::move(options)) {
  if (options_.queue_depth == 0) throw std::invalid_argument("queue depth must be positive");
  const AddrInfoPtr addr = resolve(options_.bind, true);
  listen_fd_ = ::socket(addr->ai_family, addr->ai_socktype, addr->ai_protocol);
  if (listen_fd_ < 0) throw StreamError("socket: " + errno_text());
  const int one = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  if (::bind(listen_fd_, addr->ai_addr, addr->ai_addrlen) != 0 || ::listen(listen_fd_, 64) != 0) {
    const std::string why = errno_text();
    ::close(listen_fd_);
    throw StreamError("cannot bind " + describe(options_.bind) + ": " + why);
  }
  sockaddr_in bound{};
  socklen_t len = sizeof(bound);
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&bound), &len);
  port_ = ntohs(bound.sin_port);
  log::info("listening on " + options_.bind.host + ":" + std::to_string(port_));
  acceptor_ = std::thread([this] { accept_loop(); });
}

PoseServer::~PoseServer() { stop(); }

void PoseServer::accept_loop() {
  while (!stopping_.load()) {
    pollfd pfd{listen_fd_, POLLIN, 0};
    const int ready = ::poll(&pfd, 1, 50);
    reap_closed();
    if (ready <= 0 || !(pfd.revents & POLLIN)) continue;

    sockaddr_in peer{};
    socklen_t len = sizeof(peer);
    const int fd = ::accept(listen_fd_, reinterpret_cast<sockaddr*>(&peer), &len);
    if (fd < 0) continue;
    const int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
    if (options_.send_buffer_bytes > 0) {
      ::setsockopt(fd, SOL_SOCKET, SO_SNDBUF, &options_.send_buffer_bytes, sizeof(int));
    }

    auto sub = std::make_shared<Subscriber>();
    sub->fd = fd;
    char host[INET_ADDRSTRLEN] = {};
    ::inet_ntop(AF_INET, &peer.sin_addr, host, sizeof(host));
    sub->peer = std::string(host) + ":" + std::to_string(ntohs(peer.sin_port));
    sub->writer = std::thread([this, sub] { sub->run(changed_); });
    {
      std::lock_guard lock(mutex_);
      subscribers_.push_back(sub);
      ++stats_.accepted;
    }
    log::info("subscriber " + sub->peer + " connected");
    changed_.notify_all();
  }
}

void PoseServer::reap_closed() {
  std::vector<std::shared_ptr<Subscriber>> finished;
  {
    std::lock_guard lock(mutex_);
    std::erase_if(subscribers_, [&](const std::shared_ptr<Subscriber>& s) {
      std::lock_guard sl(s->m);
      if (!s->done) return false;
      if (s->write_failed) ++stats_.write_failures;
      finished.push_back(s);
      return true;
    });
  }
  for (auto& s : finished) {
    s->writer.join();
    ::close(s->fd);
    log::debug("subscriber " + s->peer + " closed");
  }
}

void PoseServer::publish(const PoseFrame& frame) {
  const auto bytes = std::make_shared<const wire::FrameBytes>(wire::encode_frame(frame));
  std::lock_guard lock(mutex_);
  ++stats_.published;
  for (auto& sub : subscribers_) {
    std::lock_guard sl(sub->m);
    if (!sub->live()) continue;
    if (sub->queue.size() >= options_.queue_depth) {
      sub->abort();
      ++stats_.dropped_slow;
      log::info("subscriber " + sub->peer + " fell " + std::to_string(options_.queue_depth) +
                " frames behind; disconnecting");
      continue;
    }
    sub->queue.push_back(bytes);
    sub->cv.notify_one();
  }
}

std::size_t PoseServer::subscriber_count() const {
  std::lock_guard lock(mutex_);
  std::size_t n = 0;
  for (const auto& sub : subscribers_) {
    std::lock_guard sl(sub->m);
    n += sub->live() ? 1 : 0;
  }
  return n;
}

bool PoseServer::wait_for_subscribers(std::size_t n, std::chrono::milliseconds timeout) const {
  const auto deadline = std::chrono::steady_clock::now() + timeout;
  while (subscriber_count() < n) {
    if (std::chrono::steady_clock::now() >= deadline) return false;
    std::unique_lock lock(mutex_);
    changed_.wait_for(lock, std::chrono::milliseconds(10));
  }
  return true;
}

ServerStats PoseServer::stats() const {
  std::lock_guard lock(mutex_);
  return stats_;
}

void PoseServer::stop() {
  if (stopping_.exchange(true)) return;
  if (acceptor_.joinable()) acceptor_.join();
  ::close(listen_fd_);

  std::vector<std::shared_ptr<Subscriber>> subs;
  {
    std::lock_guard lock(mutex_);
    subs = subscribers_;
  }
  for (auto& s : subs) {
    std::lock_guard sl(s->m);
    s->finishing = true;
    s->cv.notify_all();
  }
  const auto deadline = std::chrono::steady_clock::now() + options_.drain_timeout;
  for (auto& s : subs) {
    std::unique_lock sl(s->m);
    if (!s->cv.wait_until(sl, deadline, [&] { return s->done; })) s->abort();
  }
  std::lock_guard lock(mutex_);
  for (auto& s : subscribers_) {
    s->writer.join();
    ::close(s->fd);
    if (s->write_failed) ++stats_.write_failures;
  }
  subscribers_.clear();
}

std::uint64_t serve(PoseServer& server, const std::function<std::optional<PoseFrame>()>& source, double fps) {
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  std::uint64_t count = 0;
  while (auto frame = source()) {
    if (fps > 0.0) {
      const auto due = start + std::chrono::duration_cast<clock::duration>(std::chrono::duration<double>(count / fps));
      std::this_thread::sleep_until(due);
    }
    frame->seq = static_cast<std::uint32_t>(count);
    frame->timestamp_us = static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::microseconds>(clock::now() - start).count());
    server.publish(*frame);
    ++count;
  }
  return count;
}

PoseClient::PoseClient(const Endpoint& endpoint, int recv_buffer_bytes) {
  const AddrInfoPtr addr = resolve(endpoint, false);
  fd_ = ::socket(addr->ai_family, addr->ai_socktype, addr->ai_protocol);
  if (fd_ < 0) throw StreamError("socket: " + errno_text());
  if (recv_buffer_bytes > 0) {
    ::setsockopt(fd_, SOL_SOCKET, SO_RCVBUF, &recv_buffer_bytes, sizeof(int));
  }
  if (::connect(fd_, addr->ai_addr, addr->ai_addrlen) != 0) {
    const std::string why = errno_text();
    ::close(fd_);
    throw StreamError("cannot connect to " + describe(endpoint) + ": " + why);
  }
}

PoseClient::~PoseClient() {
  if (fd_ >= 0) ::close(fd_);
}

void PoseClient::set_timeout(std::chrono::milliseconds timeout) {
  timeval tv{};
  tv.tv_sec = static_cast<time_t>(timeout.count() / 1000);
  tv.tv_usec = static_cast<suseconds_t>((timeout.count() % 1000) * 1000);
  ::setsockopt(fd_, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof(tv));
}

std::optional<wire::FrameBytes> PoseClient::next_bytes() {
  wire::FrameBytes buf{};
  std::size_t got = 0;
  while (got < buf.size()) {
    const ssize_t n = ::recv(fd_, buf.data() + got, buf.size() - got, 0);
    if (n == 0) break;
    if (n < 0) {
      if (errno == EINTR) continue;
      if (errno == EAGAIN || errno == EWOULDBLOCK) throw StreamError("timed out waiting for a frame");
      if (errno == ECONNRESET) break;
      throw StreamError("recv: " + errno_text());
    }
    got += static_cast<std::size_t>(n);
  }
  if (got == 0) return std::nullopt;
  if (got < buf.size()) {
    throw wire::WireError(wire::WireError::Kind::kShortRead,
                          "stream ended inside a frame (" + std::to_string(got) + " bytes)");
  }
  return buf;
}

std::optional<PoseFrame> PoseClient::next() {
  const auto bytes = next_bytes();
  if (!bytes) return std::nullopt;
  return wire::decode_frame(*bytes);
}

}  // namespace posewire::stream
