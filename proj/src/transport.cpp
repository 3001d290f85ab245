#include "thdas/transport.hpp"

#include <algorithm>
#include <array>
#include <cerrno>
#include <cstring>

#include <fcntl.h>
#include <netdb.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <sys/stat.h>
#include <termios.h>
#include <unistd.h>

#include "thdas/error.hpp"
#include "thdas/text.hpp"

namespace thdas {

namespace {

std::string errno_text() { return std::strerror(errno); }

struct AddrInfoDeleter {
    void operator()(addrinfo* ai) const { freeaddrinfo(ai); }
};
using AddrInfoPtr = std::unique_ptr<addrinfo, AddrInfoDeleter>;

AddrInfoPtr resolve(const SocketEndpoint& ep, bool passive) {
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    hints.ai_flags = passive ? AI_PASSIVE : 0;
    addrinfo* res = nullptr;
    const std::string port = std::to_string(ep.port);
    const int rc = getaddrinfo(ep.host.empty() ? nullptr : ep.host.c_str(), port.c_str(), &hints, &res);
    if (rc != 0) {
        throw TransportError("cannot resolve " + ep.host + ":" + port + ": " + gai_strerror(rc));
    }
    return AddrInfoPtr(res);
}

std::string endpoint_text(const SocketEndpoint& ep) { return ep.host + ":" + std::to_string(ep.port); }

speed_t baud_constant(int baud) {
    switch (baud) {
        case 1200: return B1200;
        case 2400: return B2400;
        case 4800: return B4800;
        case 9600: return B9600;
        case 19200: return B19200;
        case 38400: return B38400;
        case 57600: return B57600;
        case 115200: return B115200;
        default: return B0;
    }
}

std::unique_ptr<ByteSource> open_serial(const SerialEndpoint& ep) {
    if (!is_standard_baud(ep.baud)) {
        throw ConfigError("unsupported baud rate " + std::to_string(ep.baud) + " for serial device '" +
                          ep.device.string() + "'");
    }
    FileDescriptor fd(::open(ep.device.c_str(), O_RDONLY | O_NOCTTY | O_NONBLOCK | O_CLOEXEC));
    if (!fd.valid()) {
        throw TransportError("cannot open serial device '" + ep.device.string() + "': " + errno_text());
    }
    termios tio{};
    if (::tcgetattr(fd.get(), &tio) != 0) {
        throw ConfigError("'" + ep.device.string() + "' rejected serial configuration: " + errno_text());
    }
    ::cfmakeraw(&tio);
    tio.c_cflag &= ~static_cast<tcflag_t>(PARENB | CSTOPB | CSIZE);
    tio.c_cflag |= CS8 | CLOCAL | CREAD;
    tio.c_cc[VMIN] = 0;
    tio.c_cc[VTIME] = 0;
    const speed_t speed = baud_constant(ep.baud);
    if (::cfsetispeed(&tio, speed) != 0 || ::cfsetospeed(&tio, speed) != 0 ||
        ::tcsetattr(fd.get(), TCSANOW, &tio) != 0) {
        throw ConfigError("'" + ep.device.string() + "' rejected serial configuration: " + errno_text());
    }
    return std::make_unique<FdSource>(std::move(fd),
                                      "serial " + ep.device.string() + " " + std::to_string(ep.baud) + " 8N1");
}

std::unique_ptr<ByteSource> open_socket(const SocketEndpoint& ep) {
    const AddrInfoPtr addrs = resolve(ep, false);
    std::string last_error = "no address";
    for (addrinfo* ai = addrs.get(); ai != nullptr; ai = ai->ai_next) {
        FileDescriptor fd(::socket(ai->ai_family, ai->ai_socktype | SOCK_CLOEXEC, ai->ai_protocol));
        if (!fd.valid()) {
            last_error = errno_text();
            continue;
        }
        if (::connect(fd.get(), ai->ai_addr, ai->ai_addrlen) == 0) {
            return std::make_unique<FdSource>(std::move(fd), "socket " + endpoint_text(ep));
        }
        last_error = errno_text();
    }
    throw TransportError("cannot connect to " + endpoint_text(ep) + ": " + last_error);
}

std::unique_ptr<ByteSource> open_file(const FileEndpoint& ep) {
    FileDescriptor fd(::open(ep.path.c_str(), O_RDONLY | O_CLOEXEC));
    if (!fd.valid()) {
        throw TransportError("cannot open capture '" + ep.path.string() + "': " + errno_text());
    }
    return std::make_unique<FdSource>(std::move(fd), "file " + ep.path.string());
}

}  // namespace

FileDescriptor& FileDescriptor::operator=(FileDescriptor&& other) noexcept {
    if (this != &other) {
        reset(other.release());
    }
    return *this;
}

FileDescriptor::~FileDescriptor() { reset(); }

int FileDescriptor::release() {
    const int fd = fd_;
    fd_ = -1;
    return fd;
}

void FileDescriptor::reset(int fd) {
    if (fd_ >= 0) {
        ::close(fd_);
    }
    fd_ = fd;
}

SocketEndpoint parse_socket_endpoint(std::string_view text) {
    const auto colon = text.rfind(':');
    if (colon == std::string_view::npos) {
        throw ConfigError("endpoint '" + std::string(text) + "' must be host:port");
    }
    const auto port = parse_int(text.substr(colon + 1));
    if (!port || *port < 0 || *port > 65535) {
        throw ConfigError("bad port in endpoint '" + std::string(text) + "'");
    }
    SocketEndpoint ep;
    ep.host = std::string(text.substr(0, colon));
    if (ep.host.size() >= 2 && ep.host.front() == '[' && ep.host.back() == ']') {
        ep.host = ep.host.substr(1, ep.host.size() - 2);
    }
    if (ep.host.empty()) {
        ep.host = "127.0.0.1";
    }
    ep.port = static_cast<std::uint16_t>(*port);
    return ep;
}

std::string describe(const TransportConfig& config) {
    return std::visit(
        [](const auto& ep) -> std::string {
            using T = std::decay_t<decltype(ep)>;
            if constexpr (std::is_same_v<T, SerialEndpoint>) {
                return "serial " + ep.device.string() + " " + std::to_string(ep.baud) + " 8N1";
            } else if constexpr (std::is_same_v<T, SocketEndpoint>) {
                return "socket " + endpoint_text(ep);
            } else {
                return "file " + ep.path.string();
            }
        },
        config);
}

bool is_standard_baud(int baud) { return baud_constant(baud) != B0; }

std::unique_ptr<ByteSource> open_transport(const TransportConfig& config) {
    return std::visit(
        [](const auto& ep) -> std::unique_ptr<ByteSource> {
            using T = std::decay_t<decltype(ep)>;
            if constexpr (std::is_same_v<T, SerialEndpoint>) {
                return open_serial(ep);
            } else if constexpr (std::is_same_v<T, SocketEndpoint>) {
                return open_socket(ep);
            } else {
                return open_file(ep);
            }
        },
        config);
}

FdSource::FdSource(FileDescriptor fd, std::string description)
    : fd_(std::move(fd)), description_(std::move(description)) {}

ReadResult FdSource::read(std::span<char> buffer, std::chrono::milliseconds timeout) {
    pollfd pfd{fd_.get(), POLLIN, 0};
    const int ready = ::poll(&pfd, 1, static_cast<int>(timeout.count()));
    if (ready < 0) {
        if (errno == EINTR) {
            return {};
        }
        throw TransportError(description_ + ": poll failed: " + errno_text());
    }
    if (ready == 0) {
        return {};
    }
    if ((pfd.revents & POLLIN) == 0) {
        if (pfd.revents & (POLLHUP | POLLERR)) {
            return {0, true};
        }
        return {};
    }
    const ssize_t n = ::read(fd_.get(), buffer.data(), buffer.size());
    if (n > 0) {
        return {static_cast<std::size_t>(n), false};
    }
    if (n == 0) {
        return {0, true};
    }
    if (errno == EAGAIN || errno == EINTR) {
        return {};
    }
    // A pty whose other side closed reports EIO.
    if (errno == EIO) {
        return {0, true};
    }
    throw TransportError(description_ + ": read failed: " + errno_text());
}

FileSink::FileSink(const std::filesystem::path& path)
    : fd_(::open(path.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644)), path_(path.string()) {
    if (!fd_.valid()) {
        throw TransportError("cannot open '" + path_ + "' for writing: " + errno_text());
    }
}

void FileSink::write(std::string_view bytes) {
    while (!bytes.empty()) {
        const ssize_t n = ::write(fd_.get(), bytes.data(), bytes.size());
        if (n < 0) {
            if (errno == EINTR) {
                continue;
            }
            throw TransportError("write to '" + path_ + "' failed: " + errno_text());
        }
        bytes.remove_prefix(static_cast<std::size_t>(n));
    }
}

SocketSink::SocketSink(FileDescriptor fd, std::string peer) : fd_(std::move(fd)), peer_(std::move(peer)) {}

void SocketSink::write(std::string_view bytes) {
    while (!bytes.empty()) {
        const ssize_t n = ::send(fd_.get(), bytes.data(), bytes.size(), MSG_NOSIGNAL);
        if (n < 0) {
            if (errno == EINTR) {
                continue;
            }
            throw TransportError("send to " + peer_ + " failed: " + errno_text());
        }
        bytes.remove_prefix(static_cast<std::size_t>(n));
    }
}

TcpListener::TcpListener(const SocketEndpoint& endpoint) : host_(endpoint.host) {
    const AddrInfoPtr addrs = resolve(endpoint, true);
    std::string last_error = "no address";
    for (addrinfo* ai = addrs.get(); ai != nullptr; ai = ai->ai_next) {
        FileDescriptor fd(::socket(ai->ai_family, ai->ai_socktype | SOCK_CLOEXEC, ai->ai_protocol));
        if (!fd.valid()) {
            last_error = errno_text();
            continue;
        }
        const int one = 1;
        ::setsockopt(fd.get(), SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
        if (::bind(fd.get(), ai->ai_addr, ai->ai_addrlen) != 0 || ::listen(fd.get(), 1) != 0) {
            last_error = errno_text();
            continue;
        }
        sockaddr_storage bound{};
        socklen_t len = sizeof bound;
        ::getsockname(fd.get(), reinterpret_cast<sockaddr*>(&bound), &len);
        if (bound.ss_family == AF_INET) {
            port_ = ntohs(reinterpret_cast<sockaddr_in*>(&bound)->sin_port);
        } else {
            port_ = ntohs(reinterpret_cast<sockaddr_in6*>(&bound)->sin6_port);
        }
        fd_ = std::move(fd);
        return;
    }
    throw TransportError("cannot listen on " + endpoint_text(endpoint) + ": " + last_error);
}

std::unique_ptr<SocketSink> TcpListener::accept(std::chrono::milliseconds timeout) {
    pollfd pfd{fd_.get(), POLLIN, 0};
    int ready = 0;
    do {
        ready = ::poll(&pfd, 1, static_cast<int>(timeout.count()));
    } while (ready < 0 && errno == EINTR);
    if (ready == 0) {
        throw TransportError("no client connected to " + host_ + ":" + std::to_string(port_));
    }
    if (ready < 0) {
        throw TransportError("accept poll failed: " + errno_text());
    }
    FileDescriptor client(::accept4(fd_.get(), nullptr, nullptr, SOCK_CLOEXEC));
    if (!client.valid()) {
        throw TransportError("accept failed: " + errno_text());
    }
    return std::make_unique<SocketSink>(std::move(client), "client of " + host_ + ":" + std::to_string(port_));
}

StringSource::StringSource(std::string data, std::size_t max_chunk)
    : data_(std::move(data)), max_chunk_(std::max<std::size_t>(1, max_chunk)) {}

ReadResult StringSource::read(std::span<char> buffer, std::chrono::milliseconds) {
    if (pos_ >= data_.size()) {
        return {0, true};
    }
    const std::size_t n = std::min({buffer.size(), max_chunk_, data_.size() - pos_});
    std::copy_n(data_.data() + pos_, n, buffer.data());
    pos_ += n;
    return {n, false};
}

}  // namespace thdas
