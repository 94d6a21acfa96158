// Copyright 2026 The Playbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Scripted mock model. A script holds conversations keyed by the SHA-256
// of their opening user message; the reply for a request is chosen by the
// number of assistant messages already in it. Retrospective requests (last
// user message containing kRetroMarker) read from a separate table.
//
// Script file:
//   {"conversations": [{"opening": "...", "replies": ["..."],
//                       "retro": {"3": "..."}}]}

#ifndef PLAYBENCH_GATEWAY_MOCK_H_
#define PLAYBENCH_GATEWAY_MOCK_H_

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "playbench/gateway/gateway.h"

namespace playbench::gateway {

std::string Sha256Hex(std::string_view data);

// Returns the message with any appended retrospective prompt removed, and
// whether one was present.
std::pair<std::string_view, bool> StripRetroPrompt(std::string_view message);

struct ScriptedConversation {
  std::string opening;
  std::vector<std::string> replies;
  // Keyed by assistant-message count in the replayed prefix.
  std::map<int, std::string> retro;
};

class ScriptedModel : public ChatClient {
 public:
  ScriptedModel() = default;

  static ScriptedModel FromJsonText(const std::string& text);
  static ScriptedModel FromFile(const std::string& path);

  void Add(ScriptedConversation conversation);
  std::size_t size() const { return conversations_.size(); }

  std::string Complete(const ModelRef& model, std::string_view system_prompt,
                       const std::vector<ChatMessage>& messages,
                       const game::InferenceParams& params) override;

 private:
  std::map<std::string, ScriptedConversation> conversations_;
};

}  // namespace playbench::gateway

#endif  // PLAYBENCH_GATEWAY_MOCK_H_
