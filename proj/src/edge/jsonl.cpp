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

#include "edgeplay/edge/jsonl.hpp"

#include <spdlog/sinks/basic_file_sink.h>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

namespace edgeplay::edge {

JsonlLog::JsonlLog(std::string path, std::shared_ptr<spdlog::logger> logger)
    : path_(std::move(path)), logger_(std::move(logger)) {}

JsonlLog::~JsonlLog() { flush(); }

Result<std::shared_ptr<JsonlLog>, std::string> JsonlLog::open(const std::string& path) {
  std::shared_ptr<spdlog::sinks::sink> sink;
  try {
    if (path == "-") {
      sink = std::make_shared<spdlog::sinks::stdout_sink_mt>();
    } else {
      sink = std::make_shared<spdlog::sinks::basic_file_sink_mt>(path, true);
    }
  } catch (const spdlog::spdlog_ex& e) {
    return unexpected(std::string(e.what()));
  }
  auto logger = std::make_shared<spdlog::logger>("jsonl:" + path, std::move(sink));
  logger->set_pattern("%v");
  logger->set_level(spdlog::level::info);
  logger->flush_on(spdlog::level::warn);
  return std::shared_ptr<JsonlLog>(new JsonlLog(path, std::move(logger)));
}

void JsonlLog::write(const nlohmann::json& record) {
  logger_->info(record.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace));
}

void JsonlLog::flush() { logger_->flush(); }

nlohmann::json envelope_record(const protocol::Envelope& env) {
  return {{"v", env.v}, {"id", env.id}, {"type", env.type}, {"source", env.source}, {"ts", env.ts}, {"payload", env.payload}};
}

}  // namespace edgeplay::edge
