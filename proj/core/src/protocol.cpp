#include "presim/protocol.hpp"

#include <sstream>

#include "presim/world.hpp"

namespace presim {

void MessageTrace::log(long long cycle, const Message& m, int receiver) {
  std::ostringstream os;
  os << cycle << ',' << msg_kind_name(m.kind) << ',' << m.sender << ',' << receiver << ','
     << m.tag << ',';
  switch (m.kind) {
    case MsgKind::failure:
    case MsgKind::request:
      os << (reg ? reg->formats[m.media_type][m.format] : std::to_string(m.format));
      if (m.kind == MsgKind::failure && m.alert) os << "(alert)";
      break;
    case MsgKind::propose:
    case MsgKind::inform:
      if (!m.suggestion) {
        os << '0';
      } else if (reg) {
        os << reg->formats[m.media_type][m.suggestion->src] << "->"
           << reg->formats[m.media_type][m.suggestion->dst];
      } else {
        os << m.suggestion->src << "->" << m.suggestion->dst;
      }
      break;
  }
  lines.push_back(os.str());
}

uint64_t broadcast_request(World& world, int inst, int t, int format, long long cycle,
                           MessageTrace* trace) {
  Institution& sender = world.institutions[inst];
  Message m;
  m.kind = MsgKind::request;
  m.sender = inst;
  m.tag = make_tag(inst, sender.tag_counter++);
  m.media_type = t;
  m.format = format;
  for (Institution& peer : world.institutions) {
    if (peer.id == inst) continue;
    peer.mailbox.pending.push_back(m);
    if (trace) trace->log(cycle, m, peer.id);
  }
  OpenIssue issue;
  issue.media_type = t;
  issue.format = format;
  issue.due_cycle = cycle + 2;  // answers travel one cycle each way
  sender.open_issues.emplace(m.tag, std::move(issue));
  return m.tag;
}

void send_propose(World& world, int from, int to, uint64_t tag, int t,
                  std::optional<Suggestion> s, long long cycle, MessageTrace* trace) {
  Message m;
  m.kind = MsgKind::propose;
  m.sender = from;
  m.tag = tag;
  m.media_type = t;
  m.suggestion = s;
  world.institutions[to].mailbox.pending.push_back(m);
  if (trace) trace->log(cycle, m, to);
}

void send_inform_all(World& world, int from, int t, Suggestion s, long long cycle,
                     MessageTrace* trace) {
  Message m;
  m.kind = MsgKind::inform;
  m.sender = from;
  m.tag = 0;
  m.media_type = t;
  m.suggestion = s;
  for (Institution& peer : world.institutions) {
    if (peer.id == from) continue;
    peer.mailbox.pending.push_back(m);
    if (trace) trace->log(cycle, m, peer.id);
  }
}

void deliver_mail(World& world) {
  for (Institution& in : world.institutions) {
    in.mailbox.inbox = std::move(in.mailbox.pending);
    in.mailbox.pending.clear();
  }
}

}  // namespace presim
