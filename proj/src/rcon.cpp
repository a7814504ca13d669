#include "beltforge/rcon.hpp"

#include <netdb.h>
#include <sys/socket.h>
#include <sys/time.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

namespace beltforge {

namespace {

void put_le32(std::string& out, std::int32_t value) {
    const auto u = static_cast<std::uint32_t>(value);
    out.push_back(static_cast<char>(u & 0xff));
    out.push_back(static_cast<char>((u >> 8) & 0xff));
    out.push_back(static_cast<char>((u >> 16) & 0xff));
    out.push_back(static_cast<char>((u >> 24) & 0xff));
}

std::int32_t get_le32(const std::string& in, std::size_t at) {
    std::uint32_t u = 0;
    for (int b = 3; b >= 0; --b)
        u = (u << 8) | static_cast<std::uint8_t>(in[at + static_cast<std::size_t>(b)]);
    return static_cast<std::int32_t>(u);
}

// id + type words plus the two NUL terminators, excluded from the size field
// only by way of the leading length word itself.
constexpr std::size_t kPacketOverhead = 10;

std::string errno_text(const char* what) {
    return std::string(what) + ": " + std::strerror(errno);
}

}  // namespace

std::string encode_packet(std::int32_t id, std::int32_t ptype, const std::string& body) {
    if (body.size() > static_cast<std::size_t>(kRconMaxBody))
        throw std::invalid_argument("packet body exceeds " + std::to_string(kRconMaxBody) +
                                    " bytes");
    if (body.find('\0') != std::string::npos)
        throw std::invalid_argument("packet body contains a NUL byte");

    std::string out;
    out.reserve(4 + kPacketOverhead + body.size());
    put_le32(out, static_cast<std::int32_t>(kPacketOverhead + body.size()));
    put_le32(out, id);
    put_le32(out, ptype);
    out += body;
    out.push_back('\0');
    out.push_back('\0');
    return out;
}

RconPacket decode_packet(const std::string& bytes) {
    if (bytes.size() < 4 + kPacketOverhead) throw RconError("packet shorter than the minimum");
    const std::int32_t size = get_le32(bytes, 0);
    if (size < static_cast<std::int32_t>(kPacketOverhead) ||
        static_cast<std::size_t>(size) + 4 != bytes.size())
        throw RconError("packet size field disagrees with the buffer");
    if (bytes[bytes.size() - 2] != '\0' || bytes[bytes.size() - 1] != '\0')
        throw RconError("packet terminators missing");

    RconPacket packet;
    packet.id = get_le32(bytes, 4);
    packet.ptype = get_le32(bytes, 8);
    packet.body = bytes.substr(12, bytes.size() - 14);
    if (packet.body.find('\0') != std::string::npos)
        throw RconError("packet body contains a NUL byte");
    return packet;
}

RconClient::RconClient(std::string host, int port, double timeout_seconds)
    : host_(std::move(host)), port_(port), timeout_seconds_(timeout_seconds) {
    if (port_ < 1 || port_ > 65535) throw std::invalid_argument("port out of range");
    if (timeout_seconds_ <= 0.0) throw std::invalid_argument("timeout must be positive");
}

RconClient::~RconClient() { close(); }

void RconClient::connect() {
    if (connected()) return;

    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* found = nullptr;
    const std::string service = std::to_string(port_);
    if (const int rc = ::getaddrinfo(host_.c_str(), service.c_str(), &hints, &found); rc != 0)
        throw RconError("cannot resolve " + host_ + ": " + gai_strerror(rc));

    int fd = -1;
    std::string error = "no addresses for " + host_;
    for (addrinfo* a = found; a; a = a->ai_next) {
        fd = ::socket(a->ai_family, a->ai_socktype, a->ai_protocol);
        if (fd < 0) {
            error = errno_text("socket");
            continue;
        }
        if (::connect(fd, a->ai_addr, a->ai_addrlen) == 0) break;
        error = errno_text("connect");
        ::close(fd);
        fd = -1;
    }
    ::freeaddrinfo(found);
    if (fd < 0) throw RconError(error);

    timeval tv{};
    tv.tv_sec = static_cast<time_t>(timeout_seconds_);
    tv.tv_usec = static_cast<suseconds_t>((timeout_seconds_ - static_cast<double>(tv.tv_sec)) * 1e6);
    ::setsockopt(fd, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof(tv));
    ::setsockopt(fd, SOL_SOCKET, SO_SNDTIMEO, &tv, sizeof(tv));
    fd_ = fd;
}

void RconClient::close() {
    if (fd_ >= 0) {
        ::close(fd_);
        fd_ = -1;
    }
}

void RconClient::send_packet(std::int32_t id, std::int32_t ptype, const std::string& body) {
    if (!connected()) throw RconError("not connected");
    const std::string wire = encode_packet(id, ptype, body);
    std::size_t sent = 0;
    while (sent < wire.size()) {
        const ssize_t n = ::send(fd_, wire.data() + sent, wire.size() - sent, MSG_NOSIGNAL);
        if (n < 0) {
            if (errno == EINTR) continue;
            if (errno == EAGAIN || errno == EWOULDBLOCK) throw TimeoutError("send timed out");
            throw RconError(errno_text("send"));
        }
        sent += static_cast<std::size_t>(n);
    }
}

RconPacket RconClient::read_packet() {
    if (!connected()) throw RconError("not connected");
    const auto read_exact = [&](char* into, std::size_t count) {
        std::size_t got = 0;
        while (got < count) {
            const ssize_t n = ::recv(fd_, into + got, count - got, 0);
            if (n == 0) throw RconError("connection closed by peer");
            if (n < 0) {
                if (errno == EINTR) continue;
                if (errno == EAGAIN || errno == EWOULDBLOCK)
                    throw TimeoutError("no response within the timeout");
                throw RconError(errno_text("recv"));
            }
            got += static_cast<std::size_t>(n);
        }
    };

    std::string wire(4, '\0');
    read_exact(wire.data(), 4);
    const std::int32_t size = get_le32(wire, 0);
    if (size < static_cast<std::int32_t>(kPacketOverhead) ||
        size > static_cast<std::int32_t>(kPacketOverhead) + kRconMaxBody)
        throw RconError("peer announced an invalid packet size");
    wire.resize(4 + static_cast<std::size_t>(size));
    read_exact(wire.data() + 4, static_cast<std::size_t>(size));
    return decode_packet(wire);
}

void RconClient::authenticate(const std::string& password) {
    connect();
    const std::int32_t id = next_id_++;
    send_packet(id, kRconAuth, password);
    const RconPacket reply = read_packet();
    if (reply.id == -1) throw AuthError("server rejected the password");
    if (reply.id != id) throw RconError("auth reply for unexpected id");
}

std::string RconClient::exec(const std::string& command) {
    if (!connected()) throw RconError("not connected");
    const std::int32_t id = next_id_++;
    const std::int32_t sentinel = next_id_++;
    send_packet(id, kRconExec, command);
    // The protocol marks no packet as final, so a sentinel request is queued
    // behind the command; its echo closes the response.
    send_packet(sentinel, kRconResponse, "");

    std::string body;
    for (;;) {
        const RconPacket reply = read_packet();
        if (reply.id == id) {
            body += reply.body;
            continue;
        }
        if (reply.id == sentinel) return body;
        throw RconError("reply for unexpected id");
    }
}

namespace {

const char* entity_name(int code) {
    switch (code) {
        case kObstacle: return "rock-big";
        case kWall: return "stone-wall";
        case kInputInserter:
        case kOutputInserter: return "inserter";
        case kInputChest:
        case kOutputChest: return "wooden-chest";
    }
    return nullptr;
}

std::string place_command(const char* entity, Vec2 world, char facing) {
    std::string cmd = "/c remote.call(\"foi\", \"place\", \"";
    cmd += entity;
    cmd += "\", ";
    cmd += std::to_string(world.x);
    cmd += ", ";
    cmd += std::to_string(world.y);
    cmd += ", \"";
    cmd += facing;
    cmd += "\")";
    return cmd;
}

}  // namespace

std::vector<std::string> emit_commands(const ProblemMatrix& problem,
                                       const SolutionMatrix& solution) {
    std::vector<std::string> commands;
    commands.push_back("/c remote.call(\"foi\", \"clear\")");

    // World coordinates are playfield coordinates; the wall ring sits at
    // negative offsets.
    const int full = problem.full_size();
    const int shift = ProblemMatrix::kWallThickness;
    for (int y = 0; y < full; ++y) {
        for (int x = 0; x < full; ++x) {
            const int code = problem.full_cell({x, y});
            if (code == kEmpty) continue;
            char facing = 'N';
            if (code == kInputInserter)
                facing = direction_letter(opposite(problem.insert_outward()));
            else if (code == kOutputInserter)
                facing = direction_letter(problem.extract_outward());
            commands.push_back(place_command(entity_name(code), {x - shift, y - shift}, facing));
        }
    }

    const int n = solution.size();
    for (int y = 0; y < n; ++y) {
        for (int x = 0; x < n; ++x) {
            const int code = solution.at({x, y});
            if (code == kEmpty) continue;
            const char* entity = is_belt(code) ? "transport-belt" : "underground-belt";
            commands.push_back(
                place_command(entity, {x, y}, direction_letter(code_direction(code))));
        }
    }

    commands.push_back("/c remote.call(\"foi\", \"run\")");
    commands.push_back("/c remote.call(\"foi\", \"counts\")");
    return commands;
}

std::pair<int, int> parse_counts(const std::string& response) {
    std::string text = response;
    while (!text.empty() && (text.back() == '\n' || text.back() == '\r' || text.back() == ' '))
        text.pop_back();

    const auto fail = [&]() -> std::pair<int, int> {
        throw RconError("unparseable counter reply: \"" + response + "\"");
    };
    const auto digits = [&](std::size_t at, std::size_t end) {
        if (at == end) fail();
        long value = 0;
        for (std::size_t k = at; k < end; ++k) {
            if (text[k] < '0' || text[k] > '9') fail();
            value = value * 10 + (text[k] - '0');
            if (value > 1000000000) fail();
        }
        return static_cast<int>(value);
    };

    if (text.compare(0, 2, "i=") != 0) fail();
    const std::size_t semi = text.find(';');
    if (semi == std::string::npos || text.compare(semi, 3, ";o=") != 0) fail();
    const int in_count = digits(2, semi);
    const int out_count = digits(semi + 3, text.size());
    return {in_count, out_count};
}

double remote_evaluate(RconClient& session, const ProblemMatrix& problem,
                       const SolutionMatrix& solution, const SimConfig& config,
                       const Weights& weights) {
    if (!check_feasible(problem, solution).feasible) return 0.0;

    std::string last;
    for (const std::string& command : emit_commands(problem, solution))
        last = session.exec(command);
    const auto [in_count, out_count] = parse_counts(last);
    return fitness_from_counts(in_count, out_count, config, weights);
}

RconBackend::RconBackend(std::string host, int port, std::string password, double timeout_seconds)
    : password_(std::move(password)),
      client_(std::make_unique<RconClient>(std::move(host), port, timeout_seconds)) {}

double RconBackend::evaluate(const ProblemMatrix& problem, const SolutionMatrix& solution,
                             const SimConfig& config, const Weights& weights) {
    if (!check_feasible(problem, solution).feasible) return 0.0;
    if (!authenticated_) {
        client_->authenticate(password_);
        authenticated_ = true;
    }
    return remote_evaluate(*client_, problem, solution, config, weights);
}

}  // namespace beltforge
