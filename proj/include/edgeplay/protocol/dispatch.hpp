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

#pragma once

#include <functional>
#include <map>
#include <string>

#include "edgeplay/common/result.hpp"
#include "edgeplay/protocol/envelope.hpp"

namespace edgeplay::protocol {

enum class DispatchOutcome { Handled, Fallback, HandlerFailed };

/// Type-driven dispatch. Extending the protocol means adding one entry; no
/// central parser is edited.
class DispatchTable {
 public:
  using Handler = std::function<void(const Envelope&)>;

  /// Rejects a type string that is already registered.
  Result<void, ProtocolError> add(std::string type, Handler handler);
  void set_fallback(Handler handler);
  bool contains(std::string_view type) const;
  std::size_t size() const { return handlers_.size(); }

  /// Runs exactly one handler: the registered one, or the fallback. A handler
  /// that throws is reported as HandlerFailed instead of unwinding further.
  DispatchOutcome dispatch(const Envelope& env) const;

 private:
  std::map<std::string, Handler, std::less<>> handlers_;
  Handler fallback_;
};

}  // namespace edgeplay::protocol
