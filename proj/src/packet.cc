#include "manet/packet.h"

namespace manet {

namespace {

struct KindVisitor
{
  const char *operator() (const DataMsg &) const { return "DATA"; }
  const char *operator() (const DsdvUpdate &) const { return "DSDV_UPDATE"; }
  const char *operator() (const AodvRreq &) const { return "AODV_RREQ"; }
  const char *operator() (const AodvRrep &) const { return "AODV_RREP"; }
  const char *operator() (const AodvRerr &) const { return "AODV_RERR"; }
  const char *operator() (const DsrRreq &) const { return "DSR_RREQ"; }
  const char *operator() (const DsrRrep &) const { return "DSR_RREP"; }
  const char *operator() (const DsrRouteError &) const { return "DSR_RERR"; }
  const char *operator() (const DsrData &) const { return "DATA"; }
};

} // namespace

const char *
MessageKind (const Message &msg)
{
  return std::visit (KindVisitor{}, msg);
}

bool
IsData (const Message &msg)
{
  return DataOf (msg) != nullptr;
}

const DataPacket *
DataOf (const Message &msg)
{
  if (const auto *d = std::get_if<DataMsg> (&msg))
    {
      return &d->packet;
    }
  if (const auto *d = std::get_if<DsrData> (&msg))
    {
      return &d->packet;
    }
  return nullptr;
}

} // namespace manet
