/*
 * Copyright 2026 The satfl Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

// Single global event queue with a (time, sequence) total order.

#include <cstdint>
#include <queue>
#include <string>
#include <vector>

namespace satfl::sim {

enum class EventKind { window_open, window_close, compute_done, transfer_done, ps_apply, eval };

std::string to_string(EventKind k);

struct Event {
  double time = 0.0;
  std::uint64_t seq = 0;
  EventKind kind = EventKind::eval;
  std::uint64_t id = 0;
  std::uint64_t aux = 0;
};

class EventQueue {
 public:
  /// Throws std::logic_error for times before the current clock or non-finite times.
  std::uint64_t push(double time, EventKind kind, std::uint64_t id, std::uint64_t aux = 0);
  /// Removes the earliest event and advances the clock to it.
  Event pop();
  const Event& top() const { return heap_.top(); }
  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }
  double now() const { return now_; }

 private:
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      if (a.time != b.time) return a.time > b.time;
      return a.seq > b.seq;
    }
  };
  std::priority_queue<Event, std::vector<Event>, Later> heap_;
  std::uint64_t next_seq_ = 0;
  double now_ = 0.0;
};

}  // namespace satfl::sim
