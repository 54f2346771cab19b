#ifndef MANET_TYPES_H
#define MANET_TYPES_H

#include <cstdint>
#include <limits>

namespace manet {

using NodeId = uint32_t;

inline constexpr NodeId kBroadcast = std::numeric_limits<NodeId>::max ();
inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max () - 1;

} // namespace manet

#endif
