// SPDX-License-Identifier: Apache-2.0
//
// Reliable, ordered byte streams for sessions, plus the loops that move a
// plaintext byte stream through a Transmitter/Receiver pair.
#pragma once

#include <condition_variable>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "extru/protocol.hpp"

namespace extru::transport {

class ByteStream {
 public:
  virtual ~ByteStream() = default;
  virtual void write(std::span<const std::uint8_t> bytes) = 0;
  /// Blocks until at least one byte is available; 0 means end of stream.
  virtual std::size_t read(std::span<std::uint8_t> out) = 0;
  /// Signals end of stream to the peer.
  virtual void close_write() = 0;

  /// Reads exactly out.size() bytes. Returns false on end of stream before
  /// the first byte; throws ProtocolError(Truncated) on a partial read.
  bool read_exact(std::span<std::uint8_t> out);
};

/// One direction of an in-process pipe.
class MemoryChannel {
 public:
  void write(std::span<const std::uint8_t> bytes);
  std::size_t read(std::span<std::uint8_t> out);
  void close();

 private:
  std::mutex mu_;
  std::condition_variable cv_;
  std::deque<std::uint8_t> buf_;
  bool closed_ = false;
};

class MemoryStream final : public ByteStream {
 public:
  MemoryStream(std::shared_ptr<MemoryChannel> in, std::shared_ptr<MemoryChannel> out)
      : in_(std::move(in)), out_(std::move(out)) {}
  void write(std::span<const std::uint8_t> bytes) override { out_->write(bytes); }
  std::size_t read(std::span<std::uint8_t> out) override { return in_->read(out); }
  void close_write() override { out_->close(); }

 private:
  std::shared_ptr<MemoryChannel> in_;
  std::shared_ptr<MemoryChannel> out_;
};

/// Two connected endpoints.
std::pair<std::unique_ptr<MemoryStream>, std::unique_ptr<MemoryStream>> memory_pipe();

class TcpStream final : public ByteStream {
 public:
  explicit TcpStream(int fd) : fd_(fd) {}
  ~TcpStream() override;
  TcpStream(const TcpStream&) = delete;
  TcpStream& operator=(const TcpStream&) = delete;

  /// "host:port"; throws std::runtime_error on failure.
  static std::unique_ptr<TcpStream> connect(const std::string& host, std::uint16_t port);

  void write(std::span<const std::uint8_t> bytes) override;
  std::size_t read(std::span<std::uint8_t> out) override;
  void close_write() override;

 private:
  int fd_;
};

class TcpListener {
 public:
  /// Port 0 picks an ephemeral port; see port().
  TcpListener(const std::string& host, std::uint16_t port);
  ~TcpListener();
  TcpListener(const TcpListener&) = delete;
  TcpListener& operator=(const TcpListener&) = delete;

  std::uint16_t port() const noexcept { return port_; }
  std::unique_ptr<TcpStream> accept();

 private:
  int fd_ = -1;
  std::uint16_t port_ = 0;
};

/// Splits "host:port". Throws std::invalid_argument.
std::pair<std::string, std::uint16_t> parse_endpoint(const std::string& endpoint);

/// Records every byte written through it.
class RecordingStream final : public ByteStream {
 public:
  explicit RecordingStream(ByteStream& inner) : inner_(inner) {}
  void write(std::span<const std::uint8_t> bytes) override;
  std::size_t read(std::span<std::uint8_t> out) override { return inner_.read(out); }
  void close_write() override { inner_.close_write(); }
  const std::vector<std::uint8_t>& written() const noexcept { return written_; }

 private:
  ByteStream& inner_;
  std::vector<std::uint8_t> written_;
};

void write_frame(ByteStream& stream, const protocol::Frame& frame);
/// std::nullopt on a clean end of stream between frames.
std::optional<protocol::Frame> read_frame(ByteStream& stream, const Topology& topo);

/// Supplies plaintext; returns the number of bytes placed in `out`, 0 at end.
using Source = std::function<std::size_t(std::span<std::uint8_t> out)>;
using Sink = std::function<void(std::span<const std::uint8_t> bytes)>;

struct SendStats {
  std::uint64_t bytes = 0;
  std::uint64_t blocks = 0;
  std::uint64_t rekeys = 0;
};

struct RecvStats {
  std::uint64_t bytes = 0;
  std::uint64_t blocks = 0;
  std::uint64_t rekeys = 0;
};

/// Streams `source` to the peer. With `pad` the byte stream is closed with
/// ISO/IEC 7816-4 padding (0x80 then zeros, always at least one byte), so
/// any length round-trips; without it the input length must be a multiple
/// of the block size.
SendStats send_stream(ByteStream& stream, protocol::Transmitter& tx, const Source& source, bool pad = true);

/// Mirrors send_stream. ProtocolError/AuthError propagate.
RecvStats recv_stream(ByteStream& stream, protocol::Receiver& rx, const Sink& sink, bool pad = true);

/// Strips ISO/IEC 7816-4 padding in place; throws ProtocolError(Malformed).
void strip_padding(std::vector<std::uint8_t>& bytes);

}  // namespace extru::transport
