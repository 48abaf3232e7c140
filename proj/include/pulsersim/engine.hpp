// Copyright 2026 The pulsersim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <queue>
#include <vector>

#include "pulsersim/types.hpp"

namespace psim {

enum class EventKind : std::uint8_t {
  kPacketArrival,
  kServiceComplete,
  kTimerExpiry,
  kFlowStart,
  kMetricsSample,
};

/// A scheduled occurrence. `target` names the node, port or flow the event
/// is addressed to; `payload` is kind-specific (packet slot, timer epoch...).
struct Event {
  SimTime fire_time = 0;
  std::uint64_t seq = 0;
  EventKind kind = EventKind::kTimerExpiry;
  std::uint32_t target = 0;
  std::uint64_t payload = 0;
};

/// Identifies one scheduled event for cancellation. Handles are never reused
/// for a different event: the generation counter changes when a slot is
/// recycled.
struct EventHandle {
  std::uint32_t slot = UINT32_MAX;
  std::uint32_t generation = 0;

  friend bool operator==(const EventHandle&, const EventHandle&) = default;
};

class EventSink {
 public:
  virtual ~EventSink() = default;
  virtual void on_event(const Event& ev) = 0;
};

/// Deterministic discrete-event core. Events execute in (fire_time, seq)
/// order where seq is the scheduling order; the clock never runs backwards.
class Engine {
 public:
  Engine() = default;
  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  SimTime now() const { return now_; }

  /// Aborts the process when fire_time < now().
  EventHandle schedule(SimTime fire_time, EventKind kind, std::uint32_t target,
                       std::uint64_t payload = 0);

  /// True if the event was pending and will now never fire.
  bool cancel(EventHandle handle);

  /// Executes every event with fire_time <= t_end, then parks the clock at
  /// t_end (if it is ahead of the clock). Returns the number executed.
  std::uint64_t run_until(SimTime t_end, EventSink& sink);

  std::uint64_t scheduled_count() const { return scheduled_; }
  std::uint64_t fired_count() const { return fired_; }
  std::uint64_t cancelled_count() const { return cancelled_; }
  std::uint64_t pending_count() const { return scheduled_ - fired_ - cancelled_; }

 private:
  struct HeapEntry {
    SimTime time;
    std::uint64_t seq;
    std::uint32_t slot;
  };
  struct Later {
    bool operator()(const HeapEntry& a, const HeapEntry& b) const {
      return a.time != b.time ? a.time > b.time : a.seq > b.seq;
    }
  };
  enum class SlotState : std::uint8_t { kFree, kPending, kCancelled };
  struct Slot {
    Event event;
    std::uint32_t generation = 0;
    SlotState state = SlotState::kFree;
  };

  std::uint32_t acquire_slot();
  void release_slot(std::uint32_t slot);

  SimTime now_ = 0;
  std::uint64_t next_seq_ = 0;
  std::uint64_t scheduled_ = 0;
  std::uint64_t fired_ = 0;
  std::uint64_t cancelled_ = 0;
  std::priority_queue<HeapEntry, std::vector<HeapEntry>, Later> heap_;
  std::vector<Slot> slots_;
  std::vector<std::uint32_t> free_slots_;
};

}  // namespace psim
