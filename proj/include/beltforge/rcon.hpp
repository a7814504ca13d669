#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "beltforge/backend.hpp"
#include "beltforge/grid.hpp"
#include "beltforge/sim.hpp"

namespace beltforge {

// Remote-console packet types. Type 2 doubles as the auth success response.
inline constexpr std::int32_t kRconAuth = 3;
inline constexpr std::int32_t kRconExec = 2;
inline constexpr std::int32_t kRconResponse = 0;

// Longest body that still fits the 4096-byte packet ceiling after the two
// length-excluded id/type words and the two NUL terminators.
inline constexpr int kRconMaxBody = 4086;

class RconError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class AuthError : public RconError {
public:
    using RconError::RconError;
};

class TimeoutError : public RconError {
public:
    using RconError::RconError;
};

struct RconPacket {
    std::int32_t id = 0;
    std::int32_t ptype = 0;
    std::string body;  // no embedded NUL bytes
    friend bool operator==(const RconPacket&, const RconPacket&) = default;
};

// Wire layout, all little-endian: size (4 + 4 + body length + 2), id, type,
// body, then two NUL terminators. Throws std::invalid_argument on a body
// that is too long or contains NUL bytes.
std::string encode_packet(std::int32_t id, std::int32_t ptype, const std::string& body);

// Inverse of encode_packet over one complete packet. Throws RconError on a
// short buffer, a size field that disagrees with the buffer, or missing
// terminators.
RconPacket decode_packet(const std::string& bytes);

// Blocking TCP client speaking the request-response console protocol. One
// request is in flight at a time; responses are correlated by packet id.
class RconClient {
public:
    RconClient(std::string host, int port, double timeout_seconds = 5.0);
    ~RconClient();

    RconClient(const RconClient&) = delete;
    RconClient& operator=(const RconClient&) = delete;

    bool connected() const { return fd_ >= 0; }
    void connect();
    void close();

    // Sends the password and waits for the verdict: an echoed id means
    // success, id -1 raises AuthError, silence raises TimeoutError.
    void authenticate(const std::string& password);

    // Runs one console command and returns the concatenated response body.
    // Responses may span several packets; a sentinel request is queued right
    // behind the command and everything up to the sentinel's echo belongs to
    // the command.
    std::string exec(const std::string& command);

private:
    void send_packet(std::int32_t id, std::int32_t ptype, const std::string& body);
    RconPacket read_packet();

    std::string host_;
    int port_;
    double timeout_seconds_;
    int fd_ = -1;
    std::int32_t next_id_ = 1;
};

// Console commands that materialize the problem walls, ports and obstacles,
// overlay the solution belts, trigger a run, and query the item counters.
// Deterministic: full-matrix cells first, then solution cells, row-major.
// The exact command text is pinned by tests/fixtures/rcon_commands.txt.
std::vector<std::string> emit_commands(const ProblemMatrix& problem, const SolutionMatrix& solution);

// Parses a counter reply of the form "i=<int>;o=<int>". Throws RconError on
// anything else.
std::pair<int, int> parse_counts(const std::string& response);

// Plays the command list against an authenticated session and scores the
// final counter reply with the native fitness formula. Infeasible solutions
// score 0 without touching the network.
double remote_evaluate(RconClient& session, const ProblemMatrix& problem,
                       const SolutionMatrix& solution, const SimConfig& config,
                       const Weights& weights);

// EvalBackend over a remote game server. Connects and authenticates lazily
// on first use; network and parse failures surface as RconError.
class RconBackend final : public EvalBackend {
public:
    RconBackend(std::string host, int port, std::string password, double timeout_seconds = 5.0);

    double evaluate(const ProblemMatrix& problem, const SolutionMatrix& solution,
                    const SimConfig& config, const Weights& weights) override;

private:
    std::string password_;
    std::unique_ptr<RconClient> client_;
    bool authenticated_ = false;
};

}  // namespace beltforge
