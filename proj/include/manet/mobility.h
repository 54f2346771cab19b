#ifndef MANET_MOBILITY_H
#define MANET_MOBILITY_H

#include "manet/rng.h"
#include "manet/sim_time.h"
#include "manet/types.h"

#include <optional>
#include <ostream>
#include <stdexcept>
#include <vector>

namespace manet {

struct Position
{
  double x = 0;
  double y = 0;

  bool operator== (const Position &) const = default;
};

double Distance (const Position &a, const Position &b);

struct Area
{
  double width = 500;
  double height = 500;

  bool operator== (const Area &) const = default;

  bool
  Contains (const Position &p) const
  {
    return p.x >= 0 && p.x <= width && p.y >= 0 && p.y <= height;
  }
};

class InvalidNodeCount : public std::invalid_argument
{
public:
  InvalidNodeCount ()
    : std::invalid_argument ("node count must be positive")
  {
  }
};

/// Draws nodeCount positions uniformly over the area.
std::vector<Position> InitPositions (size_t nodeCount, const Area &area, RngStream &rng);

class MobilityModel
{
public:
  virtual ~MobilityModel () = default;

  virtual size_t NodeCount () const = 0;

  /// Position of a node at time t. May extend internal state lazily, but the
  /// answer for a given (node, t) never depends on the order of queries.
  virtual Position PositionAt (NodeId node, SimTime t) = 0;
};

struct RandomWaypointParams
{
  Area area;
  double minSpeed = 0.1;
  double maxSpeed = 10;
  /// Pause at each waypoint. nullopt is the static sentinel: nodes never move.
  std::optional<SimTime> pause = Seconds (0);
};

/// One straight-line movement followed by a pause.
struct WaypointLeg
{
  SimTime start;
  Position from;
  Position to;
  double speed = 0;
  SimTime arrive;
  SimTime resume;

  Position At (SimTime t) const;
};

struct WaypointState
{
  Position current;
  Position destination;
  double speed = 0;
  std::optional<SimTime> pausingUntil;
};

/**
 * Random waypoint mobility, sampled lazily.
 *
 * Each node starts moving at t = 0 from its initial position toward a uniform
 * destination at a speed uniform in (minSpeed, maxSpeed], pauses on arrival,
 * then repeats. Every node draws its legs from its own stream, so positions do
 * not depend on how often or in which order nodes are queried.
 */
class RandomWaypoint : public MobilityModel
{
public:
  /// Initial positions come from InitPositions on the (seed, "mobility", 0) stream.
  RandomWaypoint (const RandomWaypointParams &params, uint64_t seed, size_t nodeCount);

  RandomWaypoint (const RandomWaypointParams &params, uint64_t seed,
                  std::vector<Position> initial);

  size_t
  NodeCount () const override
  {
    return m_nodes.size ();
  }

  Position PositionAt (NodeId node, SimTime t) override;

  Position
  Advance (NodeId node, SimTime until)
  {
    return PositionAt (node, until);
  }

  WaypointState State (NodeId node, SimTime t);

  /// The leg in effect at time t. Undefined for static mode.
  const WaypointLeg &LegAt (NodeId node, SimTime t);

  bool
  IsStatic () const
  {
    return !m_params.pause.has_value ();
  }

  const RandomWaypointParams &
  Params () const
  {
    return m_params;
  }

private:
  struct NodeTrack
  {
    Position initial;
    RngStream rng;
    std::vector<WaypointLeg> legs;
  };

  void ExtendTo (NodeTrack &track, SimTime t);
  WaypointLeg DrawLeg (NodeTrack &track, SimTime start, Position from);

  RandomWaypointParams m_params;
  std::vector<NodeTrack> m_nodes;
};

/**
 * Piecewise-constant positions set by a script. Used for fixture topologies
 * whose links are made and broken at chosen instants.
 */
class ScriptedMobility : public MobilityModel
{
public:
  explicit ScriptedMobility (std::vector<Position> initial);

  /// From time `at` onward, node sits at `pos`. Calls for one node must be in time order.
  void MoveAt (NodeId node, SimTime at, Position pos);

  size_t
  NodeCount () const override
  {
    return m_tracks.size ();
  }

  Position PositionAt (NodeId node, SimTime t) override;

private:
  std::vector<std::vector<std::pair<SimTime, Position>>> m_tracks;
};

/// Writes `time,node,x,y` rows sampled every `interval` over [0, end].
void WriteMovementTrace (std::ostream &os, MobilityModel &mobility, SimTime interval,
                         SimTime end);

} // namespace manet

#endif
