// SPDX-License-Identifier: Apache-2.0
#include "extru/transport.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <stdexcept>

namespace extru::transport {

using protocol::ErrorKind;
using protocol::ProtocolError;

namespace {

[[noreturn]] void throw_errno(const std::string& what) {
  throw std::runtime_error(what + ": " + std::strerror(errno));
}

}  // namespace

bool ByteStream::read_exact(std::span<std::uint8_t> out) {
  std::size_t got = 0;
  while (got < out.size()) {
    const std::size_t r = read(out.subspan(got));
    if (r == 0) {
      if (got == 0) return false;
      throw ProtocolError(ErrorKind::Truncated, "stream ended " + std::to_string(out.size() - got) +
                                                    " bytes short of a full frame");
    }
    got += r;
  }
  return true;
}

void MemoryChannel::write(std::span<const std::uint8_t> bytes) {
  {
    std::lock_guard lock(mu_);
    if (closed_) throw std::runtime_error("memory channel: write after close");
    buf_.insert(buf_.end(), bytes.begin(), bytes.end());
  }
  cv_.notify_all();
}

std::size_t MemoryChannel::read(std::span<std::uint8_t> out) {
  if (out.empty()) return 0;
  std::unique_lock lock(mu_);
  cv_.wait(lock, [&] { return !buf_.empty() || closed_; });
  const std::size_t k = std::min(out.size(), buf_.size());
  std::copy_n(buf_.begin(), k, out.begin());
  buf_.erase(buf_.begin(), buf_.begin() + static_cast<std::ptrdiff_t>(k));
  return k;
}

void MemoryChannel::close() {
  {
    std::lock_guard lock(mu_);
    closed_ = true;
  }
  cv_.notify_all();
}

std::pair<std::unique_ptr<MemoryStream>, std::unique_ptr<MemoryStream>> memory_pipe() {
  auto a_to_b = std::make_shared<MemoryChannel>();
  auto b_to_a = std::make_shared<MemoryChannel>();
  return {std::make_unique<MemoryStream>(b_to_a, a_to_b), std::make_unique<MemoryStream>(a_to_b, b_to_a)};
}

TcpStream::~TcpStream() {
  if (fd_ >= 0) ::close(fd_);
}

std::unique_ptr<TcpStream> TcpStream::connect(const std::string& host, std::uint16_t port) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  const std::string service = std::to_string(port);
  if (const int rc = ::getaddrinfo(host.c_str(), service.c_str(), &hints, &res); rc != 0) {
    throw std::runtime_error("resolve " + host + ": " + ::gai_strerror(rc));
  }
  int fd = -1;
  int last_errno = 0;
  for (addrinfo* ai = res; ai != nullptr; ai = ai->ai_next) {
    fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0) {
      last_errno = errno;
      continue;
    }
    if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) break;
    last_errno = errno;
    ::close(fd);
    fd = -1;
  }
  ::freeaddrinfo(res);
  if (fd < 0) {
    errno = last_errno;
    throw_errno("connect " + host + ":" + service);
  }
  const int one = 1;
  ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
  return std::make_unique<TcpStream>(fd);
}

void TcpStream::write(std::span<const std::uint8_t> bytes) {
  std::size_t sent = 0;
  while (sent < bytes.size()) {
    const ssize_t r = ::send(fd_, bytes.data() + sent, bytes.size() - sent, MSG_NOSIGNAL);
    if (r < 0) {
      if (errno == EINTR) continue;
      throw_errno("tcp send");
    }
    sent += static_cast<std::size_t>(r);
  }
}

std::size_t TcpStream::read(std::span<std::uint8_t> out) {
  for (;;) {
    const ssize_t r = ::recv(fd_, out.data(), out.size(), 0);
    if (r >= 0) return static_cast<std::size_t>(r);
    if (errno != EINTR) throw_errno("tcp recv");
  }
}

void TcpStream::close_write() { ::shutdown(fd_, SHUT_WR); }

TcpListener::TcpListener(const std::string& host, std::uint16_t port) {
  fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd_ < 0) throw_errno("socket");
  const int one = 1;
  ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
    ::close(fd_);
    throw std::invalid_argument("listen address must be an IPv4 literal, got '" + host + "'");
  }
  if (::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0 || ::listen(fd_, 4) != 0) {
    const int e = errno;
    ::close(fd_);
    errno = e;
    throw_errno("listen " + host + ":" + std::to_string(port));
  }
  socklen_t len = sizeof(addr);
  ::getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
}

TcpListener::~TcpListener() {
  if (fd_ >= 0) ::close(fd_);
}

std::unique_ptr<TcpStream> TcpListener::accept() {
  for (;;) {
    const int fd = ::accept(fd_, nullptr, nullptr);
    if (fd >= 0) {
      const int one = 1;
      ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
      return std::make_unique<TcpStream>(fd);
    }
    if (errno != EINTR) throw_errno("accept");
  }
}

std::pair<std::string, std::uint16_t> parse_endpoint(const std::string& endpoint) {
  const auto colon = endpoint.rfind(':');
  if (colon == std::string::npos || colon + 1 == endpoint.size()) {
    throw std::invalid_argument("endpoint must be host:port, got '" + endpoint + "'");
  }
  std::string host = endpoint.substr(0, colon);
  if (host.empty()) host = "127.0.0.1";
  std::size_t used = 0;
  unsigned long port = 0;
  try {
    port = std::stoul(endpoint.substr(colon + 1), &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != endpoint.size() - colon - 1 || port > 65535) {
    throw std::invalid_argument("invalid port in '" + endpoint + "'");
  }
  return {host, static_cast<std::uint16_t>(port)};
}

void RecordingStream::write(std::span<const std::uint8_t> bytes) {
  written_.insert(written_.end(), bytes.begin(), bytes.end());
  inner_.write(bytes);
}

void write_frame(ByteStream& stream, const protocol::Frame& frame) { stream.write(frame.serialize()); }

std::optional<protocol::Frame> read_frame(ByteStream& stream, const Topology& topo) {
  std::uint8_t header = 0;
  if (!stream.read_exact(std::span(&header, 1))) return std::nullopt;
  std::vector<std::uint8_t> bytes(1 + protocol::payload_size(topo, header));
  bytes[0] = header;
  if (!stream.read_exact(std::span(bytes).subspan(1))) {
    throw ProtocolError(ErrorKind::Truncated, "stream ended after a frame header");
  }
  return protocol::parse_frame(bytes, topo);
}

SendStats send_stream(ByteStream& stream, protocol::Transmitter& tx, const Source& source, bool pad) {
  const Topology& topo = tx.topology();
  const std::size_t block_bytes = topo.n() / 8;
  std::vector<std::uint8_t> block(block_bytes);
  std::vector<std::uint8_t> wire;
  SendStats stats;
  std::size_t fill = 0;
  bool done = false;

  auto emit = [&] {
    wire.clear();
    for (const auto& f : tx.tx_block(Block(BitVector::from_bytes(block, topo.n())))) {
      const auto bytes = f.serialize();
      wire.insert(wire.end(), bytes.begin(), bytes.end());
    }
    stream.write(wire);
    ++stats.blocks;
    fill = 0;
  };

  std::vector<std::uint8_t> chunk(64 * 1024);
  while (!done) {
    const std::size_t got = source(chunk);
    if (got == 0) break;
    stats.bytes += got;
    for (std::size_t i = 0; i < got; ++i) {
      block[fill++] = chunk[i];
      if (fill == block_bytes) emit();
    }
  }
  if (pad) {
    block[fill++] = 0x80;
    std::fill(block.begin() + static_cast<std::ptrdiff_t>(fill), block.end(), 0);
    emit();
  } else if (fill != 0) {
    throw std::invalid_argument("input length is not a multiple of the " + std::to_string(block_bytes) +
                                "-byte block size");
  }
  stream.close_write();
  stats.rekeys = tx.rekeys();
  return stats;
}

void strip_padding(std::vector<std::uint8_t>& bytes) {
  while (!bytes.empty() && bytes.back() == 0) bytes.pop_back();
  if (bytes.empty() || bytes.back() != 0x80) throw ProtocolError(ErrorKind::Malformed, "invalid message padding");
  bytes.pop_back();
}

RecvStats recv_stream(ByteStream& stream, protocol::Receiver& rx, const Sink& sink, bool pad) {
  const Topology& topo = rx.topology();
  RecvStats stats;
  // With padding the last block is held back until end of stream.
  std::optional<std::vector<std::uint8_t>> held;
  std::vector<std::uint8_t> out;
  out.reserve(64 * 1024);
  while (auto frame = read_frame(stream, topo)) {
    auto block = rx.rx_frame(*frame);
    if (!block) continue;
    ++stats.blocks;
    auto bytes = block->to_bytes();
    if (pad) {
      if (held) {
        out.insert(out.end(), held->begin(), held->end());
        stats.bytes += held->size();
      }
      held = std::move(bytes);
    } else {
      out.insert(out.end(), bytes.begin(), bytes.end());
      stats.bytes += bytes.size();
    }
    if (out.size() >= 60 * 1024) {
      sink(out);
      out.clear();
    }
  }
  if (pad) {
    if (!held) throw ProtocolError(ErrorKind::Truncated, "stream ended before the final padded block");
    strip_padding(*held);
    out.insert(out.end(), held->begin(), held->end());
    stats.bytes += held->size();
  }
  if (!out.empty()) sink(out);
  stats.rekeys = rx.rekeys();
  return stats;
}

}  // namespace extru::transport
