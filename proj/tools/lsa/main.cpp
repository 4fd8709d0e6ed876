#include <iostream>

#include <CLI11.hpp>

#include "lsa/commands.hpp"
#include "lsa/error.hpp"

namespace {

void add_lda_flags(CLI::App* cmd, lsa::cli::LdaFlags& f) {
  cmd->add_option("--topics", f.topics, "LDA topic count")->check(CLI::PositiveNumber);
  cmd->add_option("--alpha", f.alpha, "document-topic prior (default 50/topics)");
  cmd->add_option("--beta", f.beta, "topic-word prior")->check(CLI::PositiveNumber);
  cmd->add_option("--iterations", f.iterations, "Gibbs sweeps")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", f.seed, "sampler seed");
  cmd->add_option("--threshold", f.threshold, "main-topic prevalence threshold");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Learning scenario assistant: dialog runner, batch evaluation and reports"};
  app.require_subcommand(1);

  lsa::cli::RunFlags run;
  auto* run_cmd = app.add_subcommand("run", "interactive terminal session");
  run_cmd->add_option("--registry", run.registry, "model registry JSON");
  run_cmd->add_option("--model", run.model, "model id")->required();
  run_cmd->add_option("--scenario", run.scenario, "scenario id (replay fixture key, canned inputs)");
  run_cmd->add_option("--scenarios-dir", run.scenario_dir, "scenario fixture directory");
  run_cmd->add_option("--language", run.language, "en or el (default: scenario language or en)");
  run_cmd->add_option("--backend", run.backend, "live or replay (default: registry)")
      ->check(CLI::IsMember({"live", "replay"}));
  run_cmd->add_option("--fixture", run.fixture, "replay fixture file override");
  run_cmd->add_option("--store", run.store, "session store directory");
  run_cmd->add_option("--resume", run.resume, "continue an existing session id");
  run_cmd->add_flag("--headless", run.headless, "answer with the scenario's canned inputs");

  lsa::cli::BatchFlags batch;
  auto* batch_cmd = app.add_subcommand("batch", "run scenario x model matrix headlessly");
  batch_cmd->add_option("--registry", batch.registry, "model registry JSON");
  batch_cmd->add_option("--scenarios-dir", batch.scenario_dir, "scenario fixture directory");
  batch_cmd->add_option("--scenarios", batch.scenarios, "scenario ids")->required()->delimiter(',');
  batch_cmd->add_option("--models", batch.models, "model ids")->required()->delimiter(',');
  batch_cmd->add_option("--out", batch.out, "output directory")->required();
  batch_cmd->add_option("--backend", batch.backend, "require this backend kind")
      ->check(CLI::IsMember({"live", "replay"}));
  batch_cmd->add_option("--jobs", batch.jobs, "parallel sessions")->check(CLI::PositiveNumber);
  add_lda_flags(batch_cmd, batch.lda);

  lsa::cli::AnalyzeFlags analyze;
  auto* analyze_cmd = app.add_subcommand("analyze", "tokens and LDA main topics of a transcript");
  analyze_cmd->add_option("--transcript", analyze.transcript, "transcript or events NDJSON")
      ->required()
      ->check(CLI::ExistingFile);
  analyze_cmd->add_option("--language", analyze.language, "en or el (default: from cell.json, else en)");
  analyze_cmd->add_option("--out", analyze.out, "write the JSON report here instead of stdout");
  add_lda_flags(analyze_cmd, analyze.lda);

  lsa::cli::ScoreFlags score;
  auto* score_cmd = app.add_subcommand("score", "record, import or export rubric scores");
  score_cmd->add_option("action", score.action, "import | export | add")
      ->required()
      ->check(CLI::IsMember({"import", "export", "add"}));
  score_cmd->add_option("--db", score.db, "score file (CSV)");
  score_cmd->add_option("--csv", score.csv, "CSV to import from or export to");
  score_cmd->add_option("--registry", score.registry, "restrict model ids to this registry");
  score_cmd->add_flag("--overwrite", score.overwrite, "replace existing scores with the same key");
  score_cmd->add_option("--model", score.model, "model id (add)");
  score_cmd->add_option("--scenario", score.scenario, "scenario id (add)");
  score_cmd->add_option("--criterion", score.criterion, "criterion id (add)");
  score_cmd->add_option("--rater", score.rater, "rater id (add)");
  score_cmd->add_option("--value", score.value, "Likert value 1-5 (add)");
  score_cmd->add_option("--note", score.note, "free-text note (add)");

  lsa::cli::ReportFlags report;
  auto* report_cmd = app.add_subcommand("report", "render comparison tables");
  report_cmd->add_option("--registry", report.registry, "model registry JSON (column order)");
  report_cmd->add_option("--scenarios-dir", report.scenario_dir, "scenario fixture directory");
  report_cmd->add_option("--sessions", report.sessions, "batch output directories");
  report_cmd->add_option("--scores", report.scores, "scores CSV");
  report_cmd->add_option("--format", report.format, "md | csv | all")
      ->check(CLI::IsMember({"md", "csv", "all"}));
  report_cmd->add_option("--out", report.out, "output directory");

  lsa::cli::ServeFlags serve;
  auto* serve_cmd = app.add_subcommand("serve", "HTTP JSON API for interactive sessions");
  serve_cmd->add_option("--registry", serve.registry, "model registry JSON");
  serve_cmd->add_option("--addr", serve.addr, "host:port to listen on");
  serve_cmd->add_option("--store", serve.store, "session store directory");
  serve_cmd->add_option("--reports", serve.reports, "directory of rendered reports");

  lsa::cli::RecordFlags record;
  auto* record_cmd =
      app.add_subcommand("record", "author a replay fixture from canned model replies");
  record_cmd->add_option("--registry", record.registry, "model registry JSON");
  record_cmd->add_option("--scenarios-dir", record.scenario_dir, "scenario fixture directory");
  record_cmd->add_option("--model", record.model, "model id")->required();
  record_cmd->add_option("--scenario", record.scenario, "scenario id")->required();
  record_cmd->add_option("--replies", record.replies, "JSON {\"replies\": [{text, latency_ms}]}")
      ->required()
      ->check(CLI::ExistingFile);
  record_cmd->add_option("--out", record.out, "fixture NDJSON to write")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) return lsa::cli::run_command(run);
    if (*batch_cmd) return lsa::cli::batch_command(batch);
    if (*analyze_cmd) return lsa::cli::analyze_command(analyze);
    if (*score_cmd) return lsa::cli::score_command(score);
    if (*report_cmd) return lsa::cli::report_command(report);
    if (*serve_cmd) return lsa::cli::serve_command(serve);
    if (*record_cmd) return lsa::cli::record_command(record);
  } catch (const lsa::Error& e) {
    std::cerr << "error (" << lsa::to_string(e.code()) << "): " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
