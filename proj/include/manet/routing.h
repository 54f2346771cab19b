#ifndef MANET_ROUTING_H
#define MANET_ROUTING_H

#include "manet/engine.h"
#include "manet/packet.h"
#include "manet/radio.h"
#include "manet/rng.h"

#include <functional>
#include <string>

namespace manet {

enum class Protocol
{
  Dsdv,
  Aodv,
  Dsr,
};

const char *ToString (Protocol p);

/// Case-insensitive; throws std::invalid_argument.
Protocol ParseProtocol (const std::string &name);

/// Why a data packet left the network without reaching its destination.
enum class DropReason
{
  NoRoute,          // DSDV lookup failed, or AODV intermediate without route
  NoRouteEver,      // discovery gave up
  LinkBroken,       // MAC reported the next hop unreachable
  BufferOverflow,   // discovery buffer full, oldest evicted
  MalformedRoute,   // DSR packet at a node not on its route
};

const char *ToString (DropReason r);

/// What a node did with a route request or reply.
enum class ForwardDecision
{
  Discarded,     // duplicate, looped, or own request echoed back
  Replied,       // answered with a route reply
  Rebroadcast,   // request flooded onward
  Forwarded,     // reply passed one hop toward the origin
  Completed,     // reply reached the origin
  Dropped,       // reply not usable (redundant, stale, or no way back)
};

const char *ToString (ForwardDecision d);

/// What a routing protocol may do to the world around its node.
class NodeServices
{
public:
  virtual ~NodeServices () = default;

  virtual NodeId Self () const = 0;
  virtual SimTime Now () const = 0;
  virtual EventHandle ScheduleTimer (SimTime delay, std::function<void ()> fn) = 0;
  virtual bool CancelTimer (const EventHandle &handle) = 0;
  virtual void SendBroadcast (MessagePtr msg, uint32_t size) = 0;
  virtual void SendUnicast (NodeId nextHop, MessagePtr msg, uint32_t size) = 0;
  virtual void DeliverToApplication (const DataPacket &packet) = 0;
  virtual void DropData (const DataPacket &packet, DropReason reason) = 0;
  /// Control messages the protocol discarded (redundant RREP, failed return path, ...).
  virtual void DropControl (const char *what) = 0;
  virtual RngStream &Rng () = 0;
};

/**
 * Engine-facing surface of a routing protocol instance bound to one node.
 *
 * Proactive protocols start timers in Start(); reactive ones do nothing until
 * the application hands them a packet.
 */
class RoutingProtocol
{
public:
  explicit RoutingProtocol (NodeServices &node)
    : m_node (node)
  {
  }
  virtual ~RoutingProtocol () = default;

  virtual Protocol Kind () const = 0;

  virtual void
  Start ()
  {
  }

  /// A packet generated by the local application.
  virtual void SendData (const DataPacket &packet) = 0;

  virtual void Receive (const Frame &frame) = 0;

  /// The MAC gave up on a unicast to nextHop.
  virtual void OnLinkFailure (NodeId nextHop, const Frame &frame) = 0;

protected:
  NodeServices &m_node;
};

} // namespace manet

#endif
