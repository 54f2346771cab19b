#include "doctest.h"

#include "manet/metrics.h"
#include "manet/scenario.h"

#include <sstream>

using namespace manet;

namespace {

/// n packets generated at `gen`; the first `received` of them arrive at `recv`.
PacketTrace
Uniform (uint32_t n, uint32_t received, SimTime gen = SimTime (), SimTime recv = Seconds (1))
{
  PacketTrace t;
  for (uint32_t i = 0; i < n; ++i)
    {
      AppPacket p{0, i, gen, 512};
      t.RecordGenerated (p);
      if (i < received)
        {
          t.RecordReceived (p, recv, 1);
        }
    }
  return t;
}

} // namespace

TEST_CASE ("delivery ratio examples")
{
  CHECK (ComputePdr (Uniform (1000, 1000)) == 100.0);
  CHECK (ComputePdr (Uniform (10000, 8000)) == 80.0);
  CHECK_THROWS_AS (ComputePdr (PacketTrace{}), NoTraffic);
}

TEST_CASE ("throughput examples")
{
  CHECK (ComputeThroughput (Uniform (1, 1, SimTime (), Seconds (1))) == 4096.0);

  PacketTrace two;
  AppPacket p0{0, 0, SimTime (), 512};
  AppPacket p1{0, 1, Seconds (1), 512};
  two.RecordGenerated (p0);
  two.RecordGenerated (p1);
  two.RecordReceived (p0, Millis (500), 1);
  two.RecordReceived (p1, Seconds (2), 1);
  CHECK (ComputeThroughput (two) == 4096.0);

  CHECK_THROWS_AS (ComputeThroughput (Uniform (5, 0)), NothingReceived);
}

TEST_CASE ("delay examples")
{
  PacketTrace t;
  AppPacket a{0, 0, SimTime (), 512};
  AppPacket b{0, 1, Seconds (1), 512};
  t.RecordGenerated (a);
  t.RecordGenerated (b);
  t.RecordReceived (a, Millis (100), 1);
  t.RecordReceived (b, Millis (1300), 1);
  CHECK (ComputeAvgDelay (t) == doctest::Approx (0.2).epsilon (1e-12));
  CHECK_THROWS_AS (ComputeAvgDelay (Uniform (3, 0)), NothingReceived);
}

TEST_CASE ("one packet over one ideal hop takes airtime plus per-hop latency")
{
  ScenarioConfig c;
  c.nodeCount = 2;
  c.nFlows = 1;
  c.pause = std::nullopt;
  c.mac.mode = MacMode::Ideal;
  c.simTime = Seconds (4);
  c.warmup = Seconds (0);
  for (Protocol p : {Protocol::Dsdv, Protocol::Aodv, Protocol::Dsr})
    {
      CAPTURE (ToString (p));
      c.protocol = p;
      SimulationHooks hooks;
      hooks.positions = std::vector<Position>{{0, 0}, {100, 0}};
      Flow f;
      f.src = 0;
      f.dst = 1;
      f.startAt = Seconds (3);
      f.stopAt = Seconds (3) + SimTime::FromMicros (1);
      hooks.flows = std::vector<Flow>{f};
      Simulation sim (c, hooks);
      sim.Run ();
      auto trace = sim.MeasuredTrace ();
      REQUIRE (trace.Records ().size () == 1);
      REQUIRE (trace.Records ()[0].receivedAt.has_value ());
      if (p == Protocol::Dsdv)
        {
          // The table has converged by 3 s, so the packet leaves at once.
          CHECK (ComputeAvgDelay (trace) == 0.003048);
        }
      else
        {
          // On-demand protocols first spend a discovery round trip.
          CHECK (ComputeAvgDelay (trace) > 0.003048);
        }
    }
}

TEST_CASE ("first delivery wins")
{
  PacketTrace t;
  AppPacket p{2, 7, Seconds (1), 512};
  t.RecordGenerated (p);
  CHECK (t.RecordReceived (p, Seconds (2), 3));
  CHECK_FALSE (t.RecordReceived (p, Seconds (3), 1));
  CHECK_FALSE (t.RecordReceived (AppPacket{2, 8, Seconds (1), 512}, Seconds (3), 1));
  CHECK (t.Records ()[0].receivedAt == Seconds (2));
  CHECK (t.Records ()[0].hops == 3);
}

TEST_CASE ("since keeps later packets and the control counters")
{
  PacketTrace t;
  t.RecordGenerated (AppPacket{0, 0, Seconds (5), 512});
  t.RecordGenerated (AppPacket{0, 1, Seconds (10), 512});
  t.CountControl ("AODV_RREQ", 24);
  t.CountControl ("AODV_RREQ", 24);
  auto later = t.Since (Seconds (10));
  CHECK (later.Records ().size () == 1);
  CHECK (later.TotalControlBytes () == 48);
  CHECK (later.ControlBytes ().at ("AODV_RREQ") == 48);
}

TEST_CASE ("the trace CSV round-trips and reproduces the metrics exactly")
{
  ScenarioConfig c;
  c.protocol = Protocol::Aodv;
  c.nodeCount = 20;
  c.nFlows = 5;
  c.simTime = Seconds (30);
  c.seed = 4;
  Simulation sim (c);
  sim.Run ();
  auto trace = sim.MeasuredTrace ();
  std::ostringstream os;
  trace.WriteCsv (os);
  CHECK (os.str ().rfind ("flow,seq,generated_at,received_at,hops\n", 0) == 0);
  std::istringstream is (os.str ());
  auto back = PacketTrace::ReadCsv (is, c.packetSize);
  CHECK (back.Records () == trace.Records ());
  auto m1 = ComputeMetrics (trace);
  auto m2 = ComputeMetrics (back);
  CHECK (m1.pdr == m2.pdr);
  CHECK (m1.throughput == m2.throughput);
  CHECK (m1.avgDelay == m2.avgDelay);
  CHECK (m1.packetsSent == m2.packetsSent);
  CHECK (m1.packetsReceived == m2.packetsReceived);
}

TEST_CASE ("malformed trace files are rejected")
{
  std::istringstream noHeader ("1,2,3,4,5\n");
  CHECK_THROWS_AS (PacketTrace::ReadCsv (noHeader), TraceFormatError);
  std::istringstream shortRow ("flow,seq,generated_at,received_at,hops\n1,2,3\n");
  CHECK_THROWS_AS (PacketTrace::ReadCsv (shortRow), TraceFormatError);
}

TEST_CASE ("metric bounds hold on simulated runs")
{
  for (Protocol p : {Protocol::Dsdv, Protocol::Aodv, Protocol::Dsr})
    {
      ScenarioConfig c;
      c.protocol = p;
      c.nodeCount = 20;
      c.nFlows = 5;
      c.simTime = Seconds (40);
      c.seed = 2;
      Simulation sim (c);
      sim.Run ();
      auto trace = sim.MeasuredTrace ();
      auto m = ComputeMetrics (trace);
      CHECK (m.pdr >= 0);
      CHECK (m.pdr <= 100);
      CHECK (m.pdr == doctest::Approx (100.0 * m.packetsReceived / m.packetsSent));
      if (m.avgDelay)
        {
          CHECK (*m.avgDelay >= 0.003048);
        }
      // Each flow delivers at most one packet more than its rate allows over
      // the measurement window.
      SimTime first = SimTime::Max ();
      SimTime last;
      for (const auto &r : trace.Records ())
        {
          first = std::min (first, r.generatedAt);
          if (r.receivedAt)
            {
              last = std::max (last, *r.receivedAt);
            }
        }
      double window = (last - first).Seconds ();
      double perFlowBits = 512 * 8;
      CHECK (m.throughput <= 5 * (4 * window + 1) * perFlowBits / window);
      for (const auto &r : trace.Records ())
        {
          if (r.receivedAt)
            {
              CHECK (*r.receivedAt >= r.generatedAt);
            }
        }
    }
}
