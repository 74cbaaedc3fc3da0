#pragma once

// Asynchronous messaging between institutions.  Messages sent during cycle c
// become readable at the start of cycle c + 1; delivery is FIFO per sender and
// recipients are walked in ascending id order, so the whole exchange is
// deterministic.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "presim/media.hpp"
#include "presim/registry.hpp"

namespace presim {

struct World;

enum class MsgKind : int { failure = 0, request = 1, propose = 2, inform = 3 };

inline const char* msg_kind_name(MsgKind k) {
  static const char* names[4] = {"failure", "request", "propose", "inform"};
  return names[static_cast<int>(k)];
}

struct Suggestion {
  int src = -1;
  int dst = -1;
};

struct Message {
  MsgKind kind;
  int sender = -1;  // institution id; for failures the pastor's media type
  uint64_t tag = 0;
  int media_type = 0;
  int format = -1;                       // failure / request payload
  std::optional<Suggestion> suggestion;  // propose (nullopt = "0", nothing to suggest) / inform
  bool alert = false;                    // failure: single-application early warning
};

struct Mailbox {
  std::vector<Message> pending;  // sent this cycle, readable next cycle
  std::vector<Message> inbox;    // delivered this cycle
};

// Tags are unique across the run: high half sender id, low half a counter.
inline uint64_t make_tag(int sender, uint64_t counter) {
  return (static_cast<uint64_t>(static_cast<uint32_t>(sender)) << 32) | (counter & 0xffffffffull);
}
inline int tag_sender(uint64_t tag) { return static_cast<int>(tag >> 32); }

// Optional send-time trace: one line per message.
struct MessageTrace {
  const FormatRegistry* reg = nullptr;
  std::vector<std::string> lines;
  void log(long long cycle, const Message& m, int receiver);
  std::string text() const {
    std::string out;
    for (const std::string& l : lines) {
      out += l;
      out += '\n';
    }
    return out;
  }
};

// Sends a request about (t, format) to every other institution and registers
// an open issue on the sender (answers are due two cycles later).  Returns the
// issue tag.  N = 1 sends nothing but still registers the issue.
uint64_t broadcast_request(World& world, int inst, int t, int format, long long cycle,
                           MessageTrace* trace);
void send_propose(World& world, int from, int to, uint64_t tag, int t,
                  std::optional<Suggestion> s, long long cycle, MessageTrace* trace);
void send_inform_all(World& world, int from, int t, Suggestion s, long long cycle,
                     MessageTrace* trace);
// Moves every pending message into the recipient inbox (previous inbox content
// has been consumed by the per-cycle readers).
void deliver_mail(World& world);

}  // namespace presim
