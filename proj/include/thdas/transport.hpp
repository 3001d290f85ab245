#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>

namespace thdas {

struct ReadResult {
    std::size_t bytes = 0;
    bool end_of_stream = false;
};

/// Device-to-host byte stream.
class ByteSource {
public:
    virtual ~ByteSource() = default;

    /// Waits at most `timeout` for data. Returns zero bytes on timeout; sets
    /// `end_of_stream` once the peer has closed and nothing remains.
    virtual ReadResult read(std::span<char> buffer, std::chrono::milliseconds timeout) = 0;

    virtual std::string describe() const = 0;
};

/// Host-side destination of simulator output. `write` throws `TransportError`.
class ByteSink {
public:
    virtual ~ByteSink() = default;
    virtual void write(std::string_view bytes) = 0;
    virtual void flush() {}
};

struct SerialEndpoint {
    std::filesystem::path device;
    int baud = 9600;
};

struct SocketEndpoint {
    std::string host = "127.0.0.1";
    std::uint16_t port = 0;
};

struct FileEndpoint {
    std::filesystem::path path;
};

using TransportConfig = std::variant<SerialEndpoint, SocketEndpoint, FileEndpoint>;

/// Parses "host:port". Throws `ConfigError`.
SocketEndpoint parse_socket_endpoint(std::string_view text);

std::string describe(const TransportConfig& config);

bool is_standard_baud(int baud);

/// Opens the configured stream. Throws `ConfigError` for rejected serial
/// parameters and `TransportError`, naming the endpoint, when it cannot be
/// opened or connected.
std::unique_ptr<ByteSource> open_transport(const TransportConfig& config);

/// Owning POSIX descriptor.
class FileDescriptor {
public:
    FileDescriptor() = default;
    explicit FileDescriptor(int fd) : fd_(fd) {}
    FileDescriptor(FileDescriptor&& other) noexcept : fd_(other.release()) {}
    FileDescriptor& operator=(FileDescriptor&& other) noexcept;
    FileDescriptor(const FileDescriptor&) = delete;
    FileDescriptor& operator=(const FileDescriptor&) = delete;
    ~FileDescriptor();

    int get() const { return fd_; }
    bool valid() const { return fd_ >= 0; }
    int release();
    void reset(int fd = -1);

private:
    int fd_ = -1;
};

/// Readable descriptor polled with a timeout: regular files, FIFOs, ttys
/// and connected sockets.
class FdSource : public ByteSource {
public:
    FdSource(FileDescriptor fd, std::string description);

    ReadResult read(std::span<char> buffer, std::chrono::milliseconds timeout) override;
    std::string describe() const override { return description_; }

private:
    FileDescriptor fd_;
    std::string description_;
};

/// Writes to a file (truncating) or an existing FIFO / character device.
class FileSink : public ByteSink {
public:
    explicit FileSink(const std::filesystem::path& path);

    void write(std::string_view bytes) override;

private:
    FileDescriptor fd_;
    std::string path_;
};

/// Writes to one accepted TCP client.
class SocketSink : public ByteSink {
public:
    SocketSink(FileDescriptor fd, std::string peer);

    void write(std::string_view bytes) override;

private:
    FileDescriptor fd_;
    std::string peer_;
};

/// Listening TCP socket. Bind to port 0 to get an ephemeral port.
class TcpListener {
public:
    explicit TcpListener(const SocketEndpoint& endpoint);

    std::uint16_t port() const { return port_; }
    const std::string& host() const { return host_; }

    /// Blocks up to `timeout` for one client. Throws `TransportError` on
    /// timeout or failure.
    std::unique_ptr<SocketSink> accept(std::chrono::milliseconds timeout);

private:
    FileDescriptor fd_;
    std::string host_;
    std::uint16_t port_ = 0;
};

/// In-memory sink, mostly for tests and captures.
class StringSink : public ByteSink {
public:
    void write(std::string_view bytes) override { data_.append(bytes); }
    const std::string& data() const { return data_; }

private:
    std::string data_;
};

/// In-memory source delivering at most `max_chunk` bytes per read.
class StringSource : public ByteSource {
public:
    explicit StringSource(std::string data, std::size_t max_chunk = 4096);

    ReadResult read(std::span<char> buffer, std::chrono::milliseconds timeout) override;
    std::string describe() const override { return "memory"; }

private:
    std::string data_;
    std::size_t pos_ = 0;
    std::size_t max_chunk_;
};

}  // namespace thdas
