#include "doctest.h"

#include "manet/engine.h"
#include "manet/rng.h"
#include "manet/scenario.h"

#include <random>
#include <set>

using namespace manet;

TEST_CASE ("SimTime renders and parses six decimals exactly")
{
  CHECK (Seconds (12).ToString () == "12.000000");
  CHECK (SimTime::FromMicros (12000250).ToString () == "12.000250");
  CHECK (SimTime::Parse ("0.003048") == SimTime::FromMicros (3048));
  CHECK (SimTime::Parse (SimTime::FromMicros (987654321).ToString ()) == SimTime::FromMicros (987654321));
  CHECK (SimTime::FromSeconds (0.25) == Millis (250));
  CHECK (Millis (3) + SimTime::FromMicros (48) == SimTime::FromMicros (3048));
}

TEST_CASE ("an event at the current instant is accepted and fires first")
{
  Engine e;
  std::vector<int> order;
  e.Schedule (Seconds (1), EventKind::TimerExpiry, 0, [&] () { order.push_back (1); });
  e.Schedule (SimTime (), EventKind::TimerExpiry, 0, [&] () { order.push_back (0); });
  e.RunUntil (Seconds (2));
  CHECK (order == std::vector<int>{0, 1});
}

TEST_CASE ("equal-time events dispatch in insertion order")
{
  Engine e;
  std::string order;
  e.Schedule (Seconds (5), EventKind::TimerExpiry, 0, [&] () { order += 'A'; });
  e.Schedule (Seconds (5), EventKind::TimerExpiry, 0, [&] () { order += 'B'; });
  e.RunUntil (Seconds (5));
  CHECK (order == "AB");
}

TEST_CASE ("scheduling before the clock throws")
{
  Engine e;
  e.RunUntil (Seconds (4));
  CHECK_THROWS_AS (e.Schedule (Seconds (3), EventKind::TimerExpiry, 0, {}), SchedulingInPast);
  CHECK_NOTHROW (e.Schedule (Seconds (4), EventKind::TimerExpiry, 0, {}));
}

TEST_CASE ("cancel semantics")
{
  Engine e;
  bool fired = false;
  auto h = e.Schedule (Seconds (1), EventKind::TimerExpiry, 0, [&] () { fired = true; });

  SUBCASE ("a pending timer never fires")
  {
    CHECK (e.Cancel (h));
    e.RunUntil (Seconds (2));
    CHECK_FALSE (fired);
  }
  SUBCASE ("an event that already fired cannot be cancelled")
  {
    e.RunUntil (Seconds (2));
    CHECK (fired);
    CHECK_FALSE (e.Cancel (h));
  }
  SUBCASE ("the second cancel reports false")
  {
    CHECK (e.Cancel (h));
    CHECK_FALSE (e.Cancel (h));
  }
  SUBCASE ("a default handle refers to nothing")
  {
    CHECK_FALSE (e.Cancel (EventHandle{}));
  }
}

TEST_CASE ("run_until on an empty queue advances the clock only")
{
  Engine e;
  CHECK (e.RunUntil (Seconds (100)) == 0);
  CHECK (e.Now () == Seconds (100));
}

TEST_CASE ("run_until stops at its bound")
{
  Engine e;
  for (int t = 1; t <= 3; ++t)
    {
      e.Schedule (Seconds (t), EventKind::TimerExpiry, 0, {});
    }
  CHECK (e.RunUntil (Seconds (2)) == 2);
  CHECK (e.PendingCount () == 1);
  CHECK (e.Now () == Seconds (2));
}

TEST_CASE ("dispatch order is non-decreasing in time and skips cancelled events")
{
  Engine e;
  e.EnableDispatchLog (true);
  RngStream rng (3, "test");
  std::set<uint64_t> cancelled;
  std::vector<EventHandle> handles;
  for (int i = 0; i < 500; ++i)
    {
      handles.push_back (e.Schedule (SimTime::FromMicros (rng.UniformInt (int64_t{0}, 1000)),
                                     EventKind::TimerExpiry, 0, {}));
    }
  for (size_t i = 0; i < handles.size (); i += 7)
    {
      e.Cancel (handles[i]);
      cancelled.insert (handles[i].seq);
    }
  e.RunUntil (Seconds (1));
  const auto &log = e.DispatchLog ();
  CHECK (log.size () == handles.size () - cancelled.size ());
  for (size_t i = 1; i < log.size (); ++i)
    {
      bool ordered = log[i - 1].at < log[i].at
                     || (log[i - 1].at == log[i].at && log[i - 1].seq < log[i].seq);
      CHECK (ordered);
    }
  for (const auto &r : log)
    {
      CHECK (cancelled.count (r.seq) == 0);
    }
}

TEST_CASE ("an identical scenario run twice dispatches identically")
{
  ScenarioConfig c;
  c.protocol = Protocol::Aodv;
  c.nodeCount = 15;
  c.nFlows = 3;
  c.simTime = Seconds (20);
  c.warmup = Seconds (2);
  c.seed = 9;
  Simulation a (c);
  Simulation b (c);
  a.GetEngine ().EnableDispatchLog (true);
  b.GetEngine ().EnableDispatchLog (true);
  a.Run ();
  b.Run ();
  CHECK (a.GetEngine ().DispatchedCount () == b.GetEngine ().DispatchedCount ());
  CHECK (a.GetEngine ().DispatchLog () == b.GetEngine ().DispatchLog ());
  CHECK (a.Metrics () == b.Metrics ());
}

TEST_CASE ("random streams are reproducible and independent by label")
{
  RngStream a (42, "mobility");
  RngStream b (42, "mobility");
  RngStream c (42, "traffic");
  RngStream d (42, "protocol", 1);
  RngStream e (42, "protocol", 2);
  bool allSame = true;
  bool anyCollide = false;
  for (int i = 0; i < 100; ++i)
    {
      uint64_t x = a.NextU64 ();
      allSame = allSame && x == b.NextU64 ();
      anyCollide = anyCollide || x == c.NextU64 () || d.NextU64 () == e.NextU64 ();
    }
  CHECK (allSame);
  CHECK_FALSE (anyCollide);
}

TEST_CASE ("a stream is the standard 64-bit Mersenne Twister on its derived seed")
{
  RngStream s (7, "mac");
  std::mt19937_64 reference (RngStream::DeriveSeed (7, "mac", 0));
  for (int i = 0; i < 1000; ++i)
    {
      REQUIRE (s.NextU64 () == reference ());
    }
  // The standard fixes the 10000th output for the default seed.
  std::mt19937_64 fixed;
  fixed.discard (9999);
  CHECK (fixed () == 9981545732273789042ULL);
}

TEST_CASE ("uniform draws stay in range")
{
  RngStream s (1, "test");
  for (int i = 0; i < 10000; ++i)
    {
      double u = s.Uniform ();
      REQUIRE (u >= 0.0);
      REQUIRE (u < 1.0);
      int64_t k = s.UniformInt (int64_t{-3}, int64_t{3});
      REQUIRE (k >= -3);
      REQUIRE (k <= 3);
      REQUIRE (s.UniformInt (uint64_t{5}) < 5);
    }
}
