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

#include "satfl/event_queue.hpp"

#include <cmath>
#include <stdexcept>

namespace satfl::sim {

std::string to_string(EventKind k) {
  switch (k) {
    case EventKind::window_open: return "window-open";
    case EventKind::window_close: return "window-close";
    case EventKind::compute_done: return "compute-done";
    case EventKind::transfer_done: return "transfer-done";
    case EventKind::ps_apply: return "ps-apply";
    case EventKind::eval: return "eval";
  }
  return "unknown";
}

std::uint64_t EventQueue::push(double time, EventKind kind, std::uint64_t id, std::uint64_t aux) {
  if (!std::isfinite(time)) throw std::logic_error("event time is not finite");
  if (time < now_) {
    throw std::logic_error("event " + to_string(kind) + " scheduled in the past (" + std::to_string(time) +
                           " < " + std::to_string(now_) + ")");
  }
  const std::uint64_t seq = next_seq_++;
  heap_.push(Event{time, seq, kind, id, aux});
  return seq;
}

Event EventQueue::pop() {
  if (heap_.empty()) throw std::logic_error("pop on empty event queue");
  Event e = heap_.top();
  heap_.pop();
  now_ = e.time;
  return e;
}

}  // namespace satfl::sim
