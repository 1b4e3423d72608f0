// Copyright 2026 The Edgeplay Authors
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

#include "edgeplay/protocol/dispatch.hpp"

namespace edgeplay::protocol {

Result<void, ProtocolError> DispatchTable::add(std::string type, Handler handler) {
  auto [it, inserted] = handlers_.emplace(std::move(type), std::move(handler));
  if (!inserted) return unexpected(ProtocolError{ProtocolErrc::DuplicateType, it->first, {}});
  return {};
}

void DispatchTable::set_fallback(Handler handler) { fallback_ = std::move(handler); }

bool DispatchTable::contains(std::string_view type) const { return handlers_.find(type) != handlers_.end(); }

DispatchOutcome DispatchTable::dispatch(const Envelope& env) const {
  auto it = handlers_.find(env.type);
  const bool known = it != handlers_.end();
  const Handler& h = known ? it->second : fallback_;
  try {
    if (h) h(env);
  } catch (...) {
    return DispatchOutcome::HandlerFailed;
  }
  return known ? DispatchOutcome::Handled : DispatchOutcome::Fallback;
}

}  // namespace edgeplay::protocol
