#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "electroar/error.hpp"
#include "electroar/transport.hpp"

namespace electroar {

namespace {

[[noreturn]] void socket_fail(const char* what) {
  fail(ErrorCode::IoError, std::string(what) + ": " + std::strerror(errno));
}

int open_socket() {
  const int fd = ::socket(AF_INET, SOCK_DGRAM, 0);
  if (fd < 0) socket_fail("socket");
  return fd;
}

}  // namespace

UdpSocket UdpSocket::bound(std::uint16_t bind_port) {
  UdpSocket sock(open_socket());
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(bind_port);
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  if (::bind(sock.fd_, reinterpret_cast<const sockaddr*>(&addr), sizeof addr) != 0) socket_fail("bind");
  return sock;
}

UdpSocket UdpSocket::unbound() { return UdpSocket(open_socket()); }

UdpSocket::UdpSocket(UdpSocket&& other) noexcept : fd_(other.fd_) { other.fd_ = -1; }

UdpSocket& UdpSocket::operator=(UdpSocket&& other) noexcept {
  if (this != &other) {
    if (fd_ >= 0) ::close(fd_);
    fd_ = other.fd_;
    other.fd_ = -1;
  }
  return *this;
}

UdpSocket::~UdpSocket() {
  if (fd_ >= 0) ::close(fd_);
}

std::uint16_t UdpSocket::local_port() const {
  sockaddr_in addr{};
  socklen_t len = sizeof addr;
  if (::getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len) != 0) socket_fail("getsockname");
  return ntohs(addr.sin_port);
}

void UdpSocket::send_to(const std::string& host, std::uint16_t port, std::span<const std::uint8_t> bytes) const {
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1)
    fail(ErrorCode::InvalidArgument, "not an IPv4 address: " + host);
  const auto sent = ::sendto(fd_, bytes.data(), bytes.size(), 0, reinterpret_cast<const sockaddr*>(&addr), sizeof addr);
  if (sent < 0 || static_cast<std::size_t>(sent) != bytes.size()) socket_fail("sendto");
}

std::optional<std::vector<std::uint8_t>> UdpSocket::receive(int timeout_ms) const {
  pollfd pfd{fd_, POLLIN, 0};
  const int ready = ::poll(&pfd, 1, timeout_ms);
  if (ready < 0) socket_fail("poll");
  if (ready == 0) return std::nullopt;
  std::vector<std::uint8_t> buf(65536);
  const auto n = ::recv(fd_, buf.data(), buf.size(), 0);
  if (n < 0) socket_fail("recv");
  buf.resize(static_cast<std::size_t>(n));
  return buf;
}

}  // namespace electroar
