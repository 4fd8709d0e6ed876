#include "lsa/backends/replay.hpp"

#include <json.hpp>

#include "lsa/error.hpp"
#include "util/fs.hpp"

namespace lsa::backends {

std::string encode_fixture_record(const FixtureRecord& record) {
  nlohmann::ordered_json j;
  j["request_hash"] = record.request_hash;
  j["response_text"] = record.response_text;
  j["latency_ms"] = record.latency_ms;
  return j.dump();
}

FixtureRecord decode_fixture_record(std::string_view line) {
  try {
    const auto j = nlohmann::json::parse(line);
    FixtureRecord record;
    record.request_hash = j.at("request_hash").get<std::string>();
    record.response_text = j.at("response_text").get<std::string>();
    record.latency_ms = j.at("latency_ms").get<long long>();
    if (record.latency_ms < 0) throw Error(ErrorCode::InvalidInput, "negative latency in fixture");
    return record;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidInput, std::string("malformed fixture record: ") + e.what());
  }
}

std::vector<FixtureRecord> read_fixture(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw Error(ErrorCode::NotFound, "replay fixture not found: " + path.string());
  }
  const auto text = util::read_file(path);
  std::vector<FixtureRecord> records;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string::npos) eol = text.size();
    ++line_no;
    const std::string_view line(text.data() + pos, eol - pos);
    if (!line.empty()) {
      try {
        records.push_back(decode_fixture_record(line));
      } catch (const Error& e) {
        throw Error(e.code(), path.string() + ":" + std::to_string(line_no) + ": " + e.what());
      }
    }
    pos = eol + 1;
  }
  return records;
}

void write_fixture(const std::filesystem::path& path, const std::vector<FixtureRecord>& records) {
  std::string text;
  for (const auto& record : records) text += encode_fixture_record(record) + "\n";
  util::write_file_atomic(path, text);
}

ReplayBackend::ReplayBackend(std::vector<FixtureRecord> records, bool strict)
    : records_(std::move(records)), strict_(strict) {}

ReplayBackend ReplayBackend::from_file(const std::filesystem::path& path, bool strict) {
  return ReplayBackend(read_fixture(path), strict);
}

CompletionResult ReplayBackend::complete(const ModelSpec& spec, const ChatHistory& history) {
  validate_history(history);
  const auto position = assistant_turns(history);
  if (position >= records_.size()) {
    throw Error(ErrorCode::ReplayExhausted,
                "replay fixture for '" + spec.id + "' has " + std::to_string(records_.size()) +
                    " turns; turn " + std::to_string(position + 1) + " requested");
  }
  const auto& record = records_[position];
  if (strict_) {
    const auto hash = history_hash(history);
    if (hash != record.request_hash) {
      throw Error(ErrorCode::ReplayMismatch,
                  "request history diverged from fixture at turn " + std::to_string(position + 1) +
                      " (expected " + record.request_hash.substr(0, 12) + ", got " +
                      hash.substr(0, 12) + ")");
    }
  }
  return CompletionResult{record.response_text, record.latency_ms, spec.id, false};
}

ScriptedBackend::ScriptedBackend(std::vector<Reply> replies) : replies_(std::move(replies)) {}

CompletionResult ScriptedBackend::complete(const ModelSpec& spec, const ChatHistory& history) {
  validate_history(history);
  std::lock_guard lock(mutex_);
  if (next_ >= replies_.size()) {
    throw Error(ErrorCode::ReplayExhausted,
                "scripted backend for '" + spec.id + "' ran out of replies");
  }
  const auto& reply = replies_[next_++];
  return CompletionResult{reply.text, reply.latency_ms, spec.id, false};
}

std::size_t ScriptedBackend::served() const {
  std::lock_guard lock(mutex_);
  return next_;
}

RecordingBackend::RecordingBackend(ChatBackend& inner, std::filesystem::path fixture_path)
    : inner_(inner), path_(std::move(fixture_path)) {
  if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
  util::write_file_atomic(path_, "");
}

CompletionResult RecordingBackend::complete(const ModelSpec& spec, const ChatHistory& history) {
  auto result = inner_.complete(spec, history);
  const FixtureRecord record{history_hash(history), result.text, result.latency_ms};
  std::lock_guard lock(mutex_);
  util::append_durable(path_, encode_fixture_record(record) + "\n");
  return result;
}

std::vector<CompletionResult> record_session(ChatBackend& backend, const ModelSpec& spec,
                                             const std::vector<ChatHistory>& requests,
                                             const std::filesystem::path& path) {
  RecordingBackend recorder(backend, path);
  std::vector<CompletionResult> results;
  results.reserve(requests.size());
  for (const auto& history : requests) results.push_back(recorder.complete(spec, history));
  return results;
}

}  // namespace lsa::backends
