#include "lsa/store/session_store.hpp"

#include <algorithm>
#include <random>

#include <fmt/format.h>
#include <json.hpp>

#include "dialog/json_io.hpp"
#include "lsa/clock.hpp"
#include "lsa/error.hpp"
#include "util/fs.hpp"
#include "util/hash.hpp"

namespace lsa::store {

namespace {

constexpr std::string_view kLinePrefix = R"({"crc":")";
constexpr std::string_view kLineMiddle = R"(","event":)";
constexpr std::size_t kCrcHexLength = 8;

void validate_id(const std::string& id) {
  const bool ok = !id.empty() && id.size() <= 128 &&
                  std::all_of(id.begin(), id.end(), [](unsigned char c) {
                    return std::isalnum(c) || c == '-' || c == '_';
                  });
  if (!ok) throw Error(ErrorCode::InvalidInput, "invalid session id '" + id + "'");
}

std::string encode_line(const TranscriptEvent& event) {
  const auto body = encode_event(event);
  return std::string(kLinePrefix) + util::hex32(util::crc32(body)) + std::string(kLineMiddle) +
         body + "}\n";
}

nlohmann::ordered_json meta_to_json(const SessionMeta& meta) {
  nlohmann::ordered_json j;
  j["session_id"] = meta.session_id;
  j["scenario_id"] = meta.scenario_id;
  j["model_id"] = meta.model_id;
  j["language"] = dialog::language_code(meta.config.language);
  j["temperature"] = meta.temperature;
  j["created_at"] = meta.created_at;
  j["config"] = dialog::to_json(meta.config);
  return j;
}

std::string state_file(const dialog::DialogState& state, std::uint64_t last_seq) {
  nlohmann::ordered_json j;
  j["last_seq"] = last_seq;
  j["state"] = dialog::to_json(state);
  return j.dump(2) + "\n";
}

}  // namespace

std::string new_session_id() {
  static thread_local std::random_device device;
  std::uniform_int_distribution<std::uint64_t> dist;
  return fmt::format("{:016x}{:016x}", dist(device), dist(device));
}

struct SessionStore::Writer::Impl {
  std::string session_id;
  std::filesystem::path dir;
  util::FileLock lock;
  std::uint64_t last_seq = 0;
};

SessionStore::Writer::Writer(std::unique_ptr<Impl> impl) : impl_(std::move(impl)) {}
SessionStore::Writer::Writer(Writer&&) noexcept = default;
SessionStore::Writer& SessionStore::Writer::operator=(Writer&&) noexcept = default;
SessionStore::Writer::~Writer() = default;

std::uint64_t SessionStore::Writer::append(const TranscriptEvent& event) {
  if (event.seq != impl_->last_seq + 1) {
    throw Error(ErrorCode::Integrity,
                fmt::format("session {}: expected seq {}, got {}", impl_->session_id,
                            impl_->last_seq + 1, event.seq));
  }
  auto stored = event;
  stored.timestamp = std::chrono::time_point_cast<std::chrono::milliseconds>(event.timestamp);
  util::append_durable(impl_->dir / "events.ndjson", encode_line(stored));
  impl_->last_seq = event.seq;
  return event.seq;
}

void SessionStore::Writer::save_state(const dialog::DialogState& state) {
  util::write_file_atomic(impl_->dir / "state.json", state_file(state, impl_->last_seq));
}

std::uint64_t SessionStore::Writer::last_seq() const noexcept { return impl_->last_seq; }
const std::string& SessionStore::Writer::session_id() const noexcept { return impl_->session_id; }

SessionStore::SessionStore(std::filesystem::path root) : root_(std::move(root)) {
  std::error_code ec;
  std::filesystem::create_directories(root_, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create store " + root_.string() + ": " + ec.message());
}

std::filesystem::path SessionStore::session_dir(const std::string& session_id) const {
  validate_id(session_id);
  return root_ / session_id;
}

bool SessionStore::exists(const std::string& session_id) const {
  return std::filesystem::exists(session_dir(session_id) / "config.json");
}

SessionMeta SessionStore::create_session(SessionMeta meta) {
  if (meta.session_id.empty()) meta.session_id = new_session_id();
  if (meta.created_at.empty()) meta.created_at = format_utc(std::chrono::system_clock::now());
  const auto dir = session_dir(meta.session_id);
  std::error_code ec;
  if (!std::filesystem::create_directory(dir, ec)) {
    if (ec) throw Error(ErrorCode::Io, "cannot create " + dir.string() + ": " + ec.message());
    throw Error(ErrorCode::Conflict, "session '" + meta.session_id + "' already exists");
  }
  const auto state = dialog::new_session(meta.session_id, meta.config, meta.config.language);
  util::write_file_atomic(dir / "events.ndjson", "");
  util::write_file_atomic(dir / "state.json", state_file(state, 0));
  // config.json last: its presence marks the session as existing.
  util::write_file_atomic(dir / "config.json", meta_to_json(meta).dump(2) + "\n");
  return meta;
}

std::vector<std::string> SessionStore::list_sessions() const {
  std::vector<std::string> ids;
  for (const auto& entry : std::filesystem::directory_iterator(root_)) {
    if (entry.is_directory() && std::filesystem::exists(entry.path() / "config.json")) {
      ids.push_back(entry.path().filename().string());
    }
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

SessionStore::Writer SessionStore::open_writer(const std::string& session_id) {
  if (!exists(session_id)) {
    throw Error(ErrorCode::NotFound, "unknown session '" + session_id + "'");
  }
  const auto dir = session_dir(session_id);
  util::FileLock lock(dir / ".lock");
  const auto events = read_events(session_id);
  auto impl = std::make_unique<Writer::Impl>(
      Writer::Impl{session_id, dir, std::move(lock), events.empty() ? 0 : events.back().seq});
  return Writer(std::move(impl));
}

std::uint64_t SessionStore::append_event(const std::string& session_id,
                                         const TranscriptEvent& event) {
  auto writer = open_writer(session_id);
  return writer.append(event);
}

SessionMeta SessionStore::read_meta(const std::string& session_id) const {
  if (!exists(session_id)) {
    throw Error(ErrorCode::NotFound, "unknown session '" + session_id + "'");
  }
  const auto path = session_dir(session_id) / "config.json";
  try {
    const auto j = nlohmann::json::parse(util::read_file(path));
    SessionMeta meta;
    meta.session_id = j.at("session_id").get<std::string>();
    meta.scenario_id = j.value("scenario_id", std::string());
    meta.model_id = j.value("model_id", std::string());
    meta.temperature = j.value("temperature", 0.7);
    meta.created_at = j.value("created_at", std::string());
    meta.config = dialog::config_from_json(j.at("config"));
    return meta;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Integrity, path.string() + ": " + e.what());
  }
}

std::vector<TranscriptEvent> SessionStore::read_events(const std::string& session_id) const {
  const auto dir = session_dir(session_id);
  const auto path = dir / "events.ndjson";
  if (!std::filesystem::exists(path)) {
    throw Error(ErrorCode::NotFound, "unknown session '" + session_id + "'");
  }
  const auto text = util::read_file(path);
  std::vector<TranscriptEvent> events;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto eol = text.find('\n', pos);
    if (eol == std::string::npos) {
      throw ChecksumError(path.string(), pos, "truncated record (no trailing newline)");
    }
    const std::string_view line(text.data() + pos, eol - pos);
    const auto header = kLinePrefix.size() + kCrcHexLength + kLineMiddle.size();
    if (line.size() < header + 1 || line.substr(0, kLinePrefix.size()) != kLinePrefix ||
        line.substr(kLinePrefix.size() + kCrcHexLength, kLineMiddle.size()) != kLineMiddle ||
        line.back() != '}') {
      throw ChecksumError(path.string(), pos, "malformed record framing");
    }
    const auto crc_text = line.substr(kLinePrefix.size(), kCrcHexLength);
    const auto body = line.substr(header, line.size() - header - 1);
    if (util::hex32(util::crc32(body)) != crc_text) {
      throw ChecksumError(path.string(), pos, "checksum mismatch");
    }
    TranscriptEvent event;
    try {
      event = decode_event(body);
    } catch (const Error& e) {
      throw ChecksumError(path.string(), pos, e.what());
    }
    const auto expected = events.empty() ? 1 : events.back().seq + 1;
    if (event.seq != expected) {
      throw Error(ErrorCode::Integrity,
                  fmt::format("{}: sequence gap at byte offset {} (expected {}, found {})",
                              path.string(), pos, expected, event.seq));
    }
    events.push_back(std::move(event));
    pos = eol + 1;
  }

  // state.json remembers how many events existed when it was written; fewer
  // events on disk means the log lost whole records.
  const auto state_path = dir / "state.json";
  if (std::filesystem::exists(state_path)) {
    try {
      const auto j = nlohmann::json::parse(util::read_file(state_path));
      const auto recorded = j.value("last_seq", std::uint64_t{0});
      const auto present = events.empty() ? 0 : events.back().seq;
      if (present < recorded) {
        throw ChecksumError(path.string(), text.size(),
                            fmt::format("log ends at seq {} but state cache recorded seq {}",
                                        present, recorded));
      }
    } catch (const nlohmann::json::exception&) {
      // A damaged cache is rebuilt from the log; it is not authoritative.
    }
  }
  return events;
}

LoadedSession SessionStore::load_session(const std::string& session_id) const {
  LoadedSession loaded;
  loaded.meta = read_meta(session_id);
  loaded.events = read_events(session_id);
  const auto initial =
      dialog::new_session(loaded.meta.session_id, loaded.meta.config, loaded.meta.config.language);
  loaded.state = fold_events(initial, loaded.events);
  loaded.config = dialog::config_from_answers(loaded.state);
  return loaded;
}

}  // namespace lsa::store
