#ifndef MANET_PACKET_H
#define MANET_PACKET_H

#include "manet/sim_time.h"
#include "manet/source_route.h"
#include "manet/types.h"

#include <cstdint>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

namespace manet {

/// What the CBR application hands to routing.
struct AppPacket
{
  uint32_t flowId = 0;
  uint32_t seq = 0;
  SimTime generatedAt;
  uint32_t size = 512;
};

/// An application packet in transit through the network layer.
struct DataPacket
{
  AppPacket app;
  NodeId source = kNoNode;
  NodeId destination = kNoNode;
  /// Links traversed so far.
  uint32_t hops = 0;
};

/// Hop-by-hop routed data, used by DSDV and AODV.
struct DataMsg
{
  DataPacket packet;
};

inline constexpr uint32_t kDsdvInfinity = 0xFFFF;

struct DsdvAdvert
{
  NodeId dest;
  uint32_t seq;
  uint32_t hops;
};

struct DsdvUpdate
{
  NodeId origin;
  std::vector<DsdvAdvert> entries;
};

struct AodvRreq
{
  NodeId origin;
  uint32_t rreqId;
  NodeId dest;
  /// Last sequence number the originator knew for dest; nullopt means unknown.
  std::optional<uint32_t> destSeqKnown;
  uint32_t originSeq;
  uint32_t hopCount;
};

struct AodvRrep
{
  NodeId dest;
  uint32_t destSeq;
  uint32_t hopCount;
  NodeId origin;
};

struct AodvRerr
{
  std::vector<std::pair<NodeId, uint32_t>> unreachable;
};

struct DsrRreq
{
  NodeId origin;
  uint32_t requestId;
  NodeId target;
  /// Addresses traversed so far, starting with origin.
  std::vector<NodeId> record;
};

struct DsrRrep
{
  SourceRoute path;
  /// Nodes from the replier back to the origin; hop i is carried to returnRoute[i].
  std::vector<NodeId> returnRoute;
  size_t index = 0;
};

struct DsrRouteError
{
  NodeId reporter;
  NodeId brokenFrom;
  NodeId brokenTo;
  NodeId originalSource;
  /// Nodes from the reporter back to the original source.
  std::vector<NodeId> returnRoute;
  size_t index = 0;
};

struct DsrData
{
  DataPacket packet;
  SourceRoute route;
  /// Position in route of the node currently holding the packet.
  size_t index = 0;
};

using Message = std::variant<DataMsg, DsdvUpdate, AodvRreq, AodvRrep, AodvRerr, DsrRreq, DsrRrep,
                             DsrRouteError, DsrData>;
using MessagePtr = std::shared_ptr<const Message>;

/// Short label for control accounting, e.g. "AODV_RREQ". Data messages are "DATA".
const char *MessageKind (const Message &msg);

bool IsData (const Message &msg);

/// The application packet inside a data message, or nullptr for control.
const DataPacket *DataOf (const Message &msg);

template <typename T>
MessagePtr
MakeMessage (T body)
{
  return std::make_shared<const Message> (std::move (body));
}

} // namespace manet

#endif
