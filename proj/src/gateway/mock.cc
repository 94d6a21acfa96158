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

#include "playbench/gateway/mock.h"

#include <fstream>
#include <sstream>

#include <openssl/evp.h>

#include "json.hpp"
#include "playbench/game/text.h"

namespace playbench::gateway {

std::string Sha256Hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(length * 2);
  for (unsigned int i = 0; i < length; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xF]);
  }
  return out;
}

std::pair<std::string_view, bool> StripRetroPrompt(std::string_view message) {
  std::size_t pos = message.find(kRetroMarker);
  if (pos == std::string_view::npos) return {message, false};
  return {text::Trim(message.substr(0, pos)), true};
}

ScriptedModel ScriptedModel::FromJsonText(const std::string& text) {
  nlohmann::json doc = nlohmann::json::parse(text);
  ScriptedModel model;
  for (const auto& c : doc.at("conversations")) {
    ScriptedConversation conversation;
    conversation.opening = c.value("opening", "");
    conversation.replies = c.value("replies", std::vector<std::string>{});
    if (c.contains("retro")) {
      for (const auto& [key, value] : c["retro"].items()) {
        conversation.retro[std::stoi(key)] = value.get<std::string>();
      }
    }
    model.Add(std::move(conversation));
  }
  return model;
}

ScriptedModel ScriptedModel::FromFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw GatewayError(GatewayError::Kind::kInvalidRequest,
                       "cannot read mock script " + path);
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return FromJsonText(buffer.str());
}

void ScriptedModel::Add(ScriptedConversation conversation) {
  std::string key = Sha256Hex(conversation.opening);
  conversations_[key] = std::move(conversation);
}

std::string ScriptedModel::Complete(const ModelRef& model,
                                    std::string_view /*system_prompt*/,
                                    const std::vector<ChatMessage>& messages,
                                    const game::InferenceParams& /*params*/) {
  ValidateMessages(messages);
  std::string_view opening;
  bool retro = false;
  if (!messages.empty()) {
    opening = StripRetroPrompt(messages.front().content).first;
    retro = messages.back().role == game::Role::kUser &&
            StripRetroPrompt(messages.back().content).second;
  }
  auto it = conversations_.find(Sha256Hex(opening));
  if (it == conversations_.end()) {
    throw GatewayError(GatewayError::Kind::kScriptExhausted,
                       "model " + model.id +
                           " has no scripted conversation for this opening");
  }
  int assistant_turns = 0;
  for (const ChatMessage& m : messages) {
    if (m.role == game::Role::kModel) ++assistant_turns;
  }
  const ScriptedConversation& conversation = it->second;
  if (retro) {
    auto r = conversation.retro.find(assistant_turns);
    if (r == conversation.retro.end()) {
      throw GatewayError(GatewayError::Kind::kScriptExhausted,
                         "no scripted retrospective reply after " +
                             std::to_string(assistant_turns) + " turns");
    }
    return r->second;
  }
  if (assistant_turns >= static_cast<int>(conversation.replies.size())) {
    throw GatewayError(GatewayError::Kind::kScriptExhausted,
                       "mock script exhausted after " +
                           std::to_string(assistant_turns) + " replies");
  }
  return conversation.replies[assistant_turns];
}

}  // namespace playbench::gateway
