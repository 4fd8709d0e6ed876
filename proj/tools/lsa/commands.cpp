#include "lsa/commands.hpp"

#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "lsa/backends/registry.hpp"
#include "lsa/backends/replay.hpp"
#include "lsa/error.hpp"
#include "lsa/linguistics/analyze.hpp"
#include "lsa/rubric/scores.hpp"
#include "lsa/service/batch.hpp"
#include "lsa/service/evaluate.hpp"
#include "lsa/service/http_api.hpp"
#include "lsa/service/runner.hpp"
#include "lsa/service/scenario.hpp"
#include "lsa/store/session_store.hpp"

namespace lsa::cli {

namespace {

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::NotFound, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
}

linguistics::AnalysisParams analysis_params(const LdaFlags& f) {
  linguistics::AnalysisParams params;
  params.lda.topics = f.topics;
  params.lda.alpha = f.alpha;
  params.lda.beta = f.beta;
  params.lda.iterations = f.iterations;
  params.lda.seed = f.seed;
  params.threshold = f.threshold;
  return params;
}

std::set<std::string> registry_ids(const std::filesystem::path& path) {
  if (path.empty()) return {};
  const auto ids = backends::ModelRegistry::load(path).ids();
  return {ids.begin(), ids.end()};
}

std::string read_answer(std::istream& in, bool multiline, bool& eof) {
  std::string line;
  if (!multiline) {
    eof = !std::getline(in, line);
    return line;
  }
  std::string text;
  bool any = false;
  while (std::getline(in, line)) {
    if (line == ".") return text;
    if (any) text += '\n';
    text += line;
    any = true;
  }
  eof = !any;
  return text;
}

void print_events(const std::vector<store::TranscriptEvent>& events, std::size_t from) {
  for (std::size_t i = from; i < events.size(); ++i) {
    const auto& e = events[i];
    if (e.kind == store::EventKind::ModelReply) {
      std::cout << "\n[assistant]\n" << e.content << "\n";
    } else if (e.kind == store::EventKind::Warning) {
      std::cerr << "warning: " << e.content << "\n";
    }
  }
}

}  // namespace

int run_command(const RunFlags& flags) {
  const auto registry = backends::ModelRegistry::load(flags.registry);
  auto spec = registry.get(flags.model);
  if (!flags.backend.empty()) spec.backend_kind = backends::parse_backend_kind(flags.backend);

  std::optional<service::ScenarioFixture> scenario;
  if (!flags.scenario.empty()) scenario = service::find_scenario(flags.scenario_dir, flags.scenario);
  if (flags.headless && !scenario) {
    throw Error(ErrorCode::Configuration, "--headless needs --scenario");
  }

  store::SessionStore store(flags.store);
  std::string scenario_id = flags.scenario;
  if (!flags.resume.empty()) scenario_id = store.read_meta(flags.resume).scenario_id;
  auto backend = backends::make_backend(spec, scenario_id, flags.fixture);

  std::optional<service::Session> session;
  if (flags.resume.empty()) {
    store::SessionMeta meta;
    meta.scenario_id = scenario_id;
    meta.model_id = spec.id;
    meta.config.language = !flags.language.empty() ? dialog::parse_language(flags.language)
                           : scenario             ? scenario->language
                                                  : dialog::Language::English;
    session.emplace(service::Session::create(store, meta, *backend, spec));
  } else {
    session.emplace(service::Session::open(store, flags.resume, *backend, spec));
  }
  std::cerr << "session " << session->meta().session_id << " (store " << flags.store.string()
            << ")\n";

  if (flags.headless) {
    const auto result = service::run_headless(*session, scenario->inputs);
    for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
    std::cout << result.final_plan << "\n";
    return 0;
  }

  std::size_t printed = session->events().size();
  auto action = session->advance();
  print_events(session->events(), printed);
  printed = session->events().size();
  while (!session->done()) {
    const auto& ask = std::get<dialog::AskUser>(action);
    std::cout << "\n[question] " << ask.question << "\n";
    if (ask.keywords) std::cout << "(" << dialog::to_string(*ask.keywords) << ")\n";
    const bool multiline = session->state().phase.is(dialog::PhaseKind::AwaitHumanEdit);
    if (multiline) std::cout << "(paste the text, then a line with a single '.')\n";
    std::cout << "> " << std::flush;
    bool eof = false;
    const auto answer = read_answer(std::cin, multiline, eof);
    if (eof) {
      std::cerr << "\ninput closed; resume with --resume " << session->meta().session_id << "\n";
      return 0;
    }
    action = session->submit(answer).action;
    print_events(session->events(), printed);
    printed = session->events().size();
  }
  std::cout << "\n[final plan]\n" << std::get<dialog::Finish>(action).final_plan << "\n";
  return 0;
}

int batch_command(const BatchFlags& flags) {
  const auto registry = backends::ModelRegistry::load(flags.registry);
  service::BatchJob job;
  job.scenario_ids = flags.scenarios;
  job.model_ids = flags.models;
  if (!flags.backend.empty()) job.backend_kind = backends::parse_backend_kind(flags.backend);
  job.concurrency_limit = flags.jobs;
  job.output_dir = flags.out;
  job.scenario_dir = flags.scenario_dir;
  job.analysis = analysis_params(flags.lda);
  const auto summary = service::run_batch(job, registry);
  for (const auto& cell : summary.cells) {
    std::cout << fmt::format("{:<28} {:<14} {}", cell.scenario_id, cell.model_id,
                             cell.ok ? "ok" : "FAILED: " + cell.error)
              << "\n";
  }
  std::cout << fmt::format("{} succeeded, {} failed; summary in {}\n", summary.succeeded(),
                           summary.failed(), (flags.out / "summary.json").string());
  return summary.exit_code();
}

int analyze_command(const AnalyzeFlags& flags) {
  std::vector<store::TranscriptEvent> events;
  std::istringstream in(read_text(flags.transcript));
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded()) throw Error(ErrorCode::InvalidInput, "transcript line is not JSON");
    // Store logs wrap each event with a checksum; exports do not.
    events.push_back(store::decode_event(j.contains("event") ? j["event"].dump() : line));
  }
  auto language = dialog::Language::English;
  if (!flags.language.empty()) {
    language = dialog::parse_language(flags.language);
  } else if (const auto cell = flags.transcript.parent_path() / "cell.json";
             std::filesystem::exists(cell)) {
    language = dialog::parse_language(nlohmann::json::parse(read_text(cell)).at("language").get<std::string>());
  }
  const auto report = linguistics::analyze(service::model_replies(events), language,
                                           analysis_params(flags.lda));
  const auto json = linguistics::report_to_json(report);
  if (flags.out.empty()) {
    std::cout << json;
  } else {
    write_text(flags.out, json);
  }
  return 0;
}

int score_command(const ScoreFlags& flags) {
  rubric::ScoreFile file(flags.db, registry_ids(flags.registry));
  if (flags.action == "import") {
    if (flags.csv.empty()) throw Error(ErrorCode::Configuration, "import needs --csv");
    const auto n = file.import_csv(read_text(flags.csv), flags.overwrite);
    std::cout << fmt::format("imported {} score(s) into {}\n", n, flags.db.string());
  } else if (flags.action == "export") {
    const auto csv = file.load().to_csv();
    if (flags.csv.empty()) {
      std::cout << csv;
    } else {
      write_text(flags.csv, csv);
    }
  } else {
    file.record({flags.model, flags.scenario, flags.criterion, flags.rater, flags.value, flags.note},
                flags.overwrite);
    std::cout << "recorded\n";
  }
  return 0;
}

int report_command(const ReportFlags& flags) {
  const auto registry = backends::ModelRegistry::load(flags.registry);
  service::EvaluationRequest request;
  request.batch_dirs = flags.sessions;
  if (!flags.scores.empty()) request.scores_csv = flags.scores;
  if (std::filesystem::is_directory(flags.scenario_dir)) request.scenario_dir = flags.scenario_dir;
  const auto report = service::evaluate(request, registry);
  const auto written =
      service::write_report(report, flags.out, service::parse_report_format(flags.format));
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
  for (const auto& path : written) std::cout << path.string() << "\n";
  return 0;
}

namespace {
service::ApiServer* g_server = nullptr;
extern "C" void handle_stop(int) {
  if (g_server != nullptr) g_server->stop();
}
}  // namespace

int serve_command(const ServeFlags& flags) {
  const auto colon = flags.addr.rfind(':');
  if (colon == std::string::npos) throw Error(ErrorCode::Configuration, "--addr must be host:port");
  const auto host = flags.addr.substr(0, colon);
  const int port = std::stoi(flags.addr.substr(colon + 1));
  service::ApiConfig config;
  config.store_dir = flags.store;
  config.reports_dir = flags.reports;
  config.registry = backends::ModelRegistry::load(flags.registry);
  service::ApiServer server(std::move(config));
  g_server = &server;
  std::signal(SIGINT, handle_stop);
  std::signal(SIGTERM, handle_stop);
  std::cerr << "listening on " << host << ":" << port << "\n";
  const bool ok = server.listen(host, port);
  g_server = nullptr;
  if (!ok) throw Error(ErrorCode::Io, "could not listen on " + flags.addr);
  return 0;
}

int record_command(const RecordFlags& flags) {
  const auto registry = backends::ModelRegistry::load(flags.registry);
  const auto& spec = registry.get(flags.model);
  const auto scenario = service::find_scenario(flags.scenario_dir, flags.scenario);
  const auto replies_json = nlohmann::json::parse(read_text(flags.replies));
  std::vector<backends::ScriptedBackend::Reply> replies;
  for (const auto& r : replies_json.at("replies")) {
    replies.push_back({r.at("text").get<std::string>(), r.value("latency_ms", 0LL)});
  }
  backends::ScriptedBackend scripted(replies);
  backends::RecordingBackend recorder(scripted, flags.out);

  const auto scratch = std::filesystem::temp_directory_path() /
                       ("lsa-record-" + store::new_session_id());
  store::SessionStore store(scratch);
  store::SessionMeta meta;
  meta.scenario_id = scenario.scenario_id;
  meta.model_id = spec.id;
  meta.config.language = scenario.language;
  int status = 0;
  try {
    auto session = service::Session::create(store, meta, recorder, spec);
    const auto result = service::run_headless(session, scenario.inputs);
    for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
    if (scripted.served() != replies.size()) {
      std::cerr << fmt::format("warning: {} of {} replies used\n", scripted.served(),
                               replies.size());
      status = 1;
    }
  } catch (...) {
    std::filesystem::remove_all(scratch);
    throw;
  }
  std::filesystem::remove_all(scratch);
  std::cout << fmt::format("wrote {} turn(s) to {}\n", scripted.served(), flags.out.string());
  return status;
}

}  // namespace lsa::cli
