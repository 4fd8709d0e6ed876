#include <doctest.h>

#include <algorithm>
#include <random>

#include "lsa/error.hpp"
#include "lsa/rubric/criteria.hpp"
#include "lsa/rubric/rational.hpp"
#include "lsa/rubric/report.hpp"
#include "lsa/rubric/scores.hpp"
#include "test_support.hpp"

using namespace lsa;
using namespace lsa::rubric;

namespace {

/// Schoolbook long division of a non-negative fraction to two places, then
/// trailing-zero removal.
std::string long_division(long long num, long long den) {
  std::string out = std::to_string(num / den);
  long long rem = num % den;
  std::string frac;
  for (int i = 0; i < 2; ++i) {
    rem *= 10;
    frac += static_cast<char>('0' + rem / den);
    rem %= den;
  }
  while (!frac.empty() && frac.back() == '0') frac.pop_back();
  return frac.empty() ? out : out + "." + frac;
}

RubricScore score(std::string model, std::string scenario, std::string criterion,
                  std::string rater, int value) {
  return {std::move(model), std::move(scenario), std::move(criterion), std::move(rater), value, ""};
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::Io;
}

}  // namespace

TEST_CASE("rational arithmetic stays exact") {
  CHECK(Rational(2, 4) == Rational(1, 2));
  CHECK(Rational(1, -3) == Rational(-1, 3));
  CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
  CHECK(Rational(1, 3) * 3 == Rational(1));
  CHECK(Rational(1, 2) / Rational(1, 4) == Rational(2));
  CHECK(Rational(1, 3) < Rational(34, 100));
  CHECK(to_string(Rational(14, 3)) == "14/3");
  CHECK_THROWS_AS(Rational(1, 0), Error);
  CHECK_THROWS_AS(Rational(1) / Rational(0), Error);
  CHECK_THROWS_AS(Rational(INT64_MAX) + Rational(1), Error);
}

TEST_CASE("display truncates toward zero") {
  CHECK(format_truncated(Rational(14, 3)) == "4.66");
  CHECK(format_truncated(Rational(11, 3)) == "3.66");
  CHECK(format_truncated(Rational(4)) == "4");
  CHECK(format_truncated(Rational(9, 2)) == "4.5");
  CHECK(format_truncated(Rational(10, 3)) == "3.33");
  CHECK(format_truncated(Rational(-14, 3)) == "-4.66");
  CHECK(format_truncated(Rational(-1, 300)) == "0");
  CHECK(format_truncated(Rational(2999, 3), 0) == "999");
  CHECK(format_truncated(Rational(901, 3)) == "300.33");
  CHECK(format_cell(Rational(5)) == "5");
  CHECK(code_of([] { format_cell(Rational(11, 2)); }) == ErrorCode::Range);
  CHECK(code_of([] { format_cell(Rational(1, 2)); }) == ErrorCode::Range);
}

TEST_CASE("every mean of up to six Likert scores matches long division") {
  for (long long n = 1; n <= 6; ++n) {
    for (long long sum = n; sum <= 5 * n; ++sum) {
      CAPTURE(sum);
      CAPTURE(n);
      CHECK(format_cell(Rational(sum, n)) == long_division(sum, n));
    }
  }
}

TEST_CASE("decimal parsing") {
  CHECK(parse_decimal("4.66") == Rational(233, 50));
  CHECK(parse_decimal("-2") == Rational(-2));
  CHECK(parse_decimal("300.33") == Rational(30033, 100));
  for (const auto* bad : {"", "4.", ".5", "1e3", "4,5", "abc", "--1"}) {
    CHECK_MESSAGE(code_of([&] { parse_decimal(bad); }) == ErrorCode::InvalidInput, bad);
  }
}

TEST_CASE("criteria catalogue") {
  CHECK(criteria_of_kind(CriterionKind::Quantitative).size() == 7);
  CHECK(criteria_of_kind(CriterionKind::Qualitative).size() == 8);
  CHECK(criteria_of_kind(CriterionKind::Linguistic).size() == 2);
  CHECK(criterion("completeness_conciseness").name == "Balancing Completeness and Conciseness");
  CHECK(criterion(kMainTopicsCriterion).name == "Number of Main Topics based on LDA");
  CHECK_FALSE(find_criterion("nope"));
  CHECK(code_of([] { criterion("nope"); }) == ErrorCode::NotFound);
  CHECK(parse_criterion_kind(to_string(CriterionKind::Qualitative)) == CriterionKind::Qualitative);
}

TEST_CASE("score validation") {
  const std::set<std::string> models{"m1"};
  CHECK_NOTHROW(validate_score(score("m1", "s", "accuracy", "r", 5), &models));
  CHECK(code_of([&] { validate_score(score("m1", "s", "accuracy", "r", 0), &models); }) == ErrorCode::Range);
  CHECK(code_of([&] { validate_score(score("m1", "s", "accuracy", "r", 6), &models); }) == ErrorCode::Range);
  CHECK(code_of([&] { validate_score(score("m2", "s", "accuracy", "r", 3), &models); }) == ErrorCode::NotFound);
  CHECK(code_of([&] { validate_score(score("m1", "s", "bogus", "r", 3), &models); }) == ErrorCode::NotFound);
  CHECK(code_of([&] { validate_score(score("m1", "s", "tokens", "r", 3), &models); }) == ErrorCode::NotFound);
  CHECK(code_of([&] { validate_score(score("m1", "", "accuracy", "r", 3), &models); }) == ErrorCode::InvalidInput);
}

TEST_CASE("score book conflicts and overwrite") {
  ScoreBook book({"m"});
  book.record(score("m", "s", "accuracy", "r1", 4));
  CHECK(code_of([&] { book.record(score("m", "s", "accuracy", "r1", 5)); }) == ErrorCode::Conflict);
  book.record(score("m", "s", "accuracy", "r1", 5), true);
  CHECK(book.size() == 1);
  CHECK(book.scores()[0].value == 5);
  CHECK(book.contains(ScoreKey{"m", "s", "accuracy", "r1"}));
}

TEST_CASE("score CSV round trip with quoting") {
  std::vector<RubricScore> scores{score("m", "s", "accuracy", "r1", 4),
                                  score("m", "s", "creativity", "r1", 2)};
  scores[1].note = "said \"fine\", mostly\nsecond line";
  const auto csv = scores_to_csv(scores);
  CHECK(csv.rfind(std::string(kScoresCsvHeader), 0) == 0);
  CHECK(parse_scores_csv(csv) == scores);
  CHECK(ScoreBook::from_csv(csv).to_csv() == csv);
  CHECK_THROWS_AS(parse_scores_csv("model,scenario\n"), Error);
  CHECK_THROWS_AS(parse_scores_csv(std::string(kScoresCsvHeader) + "\nm,s,accuracy,r,x,\n"), Error);
}

TEST_CASE("score file persists and serializes writers") {
  test::TempDir dir;
  ScoreFile file(dir / "scores.csv", {"m"});
  file.record(score("m", "s", "accuracy", "r1", 3));
  CHECK(file.import_csv(scores_to_csv({score("m", "s", "relevance", "r1", 5)})) == 1);
  CHECK(ScoreFile(dir / "scores.csv").load().size() == 2);
  CHECK(code_of([&] { file.record(score("m", "s", "accuracy", "r1", 4)); }) == ErrorCode::Conflict);
}

TEST_CASE("aggregation is exact and insensitive to row order") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<RubricScore> scores;
    std::map<std::pair<std::string, std::string>, std::pair<long long, long long>> oracle;
    for (const auto* model : {"a", "b", "c"}) {
      for (const auto* crit : {"accuracy", "coherence", "simplicity_complexity"}) {
        const int raters = 1 + static_cast<int>(rng() % 5);
        for (int r = 0; r < raters; ++r) {
          const int v = 1 + static_cast<int>(rng() % 5);
          scores.push_back(score(model, "s", crit, "r" + std::to_string(r), v));
          auto& [sum, n] = oracle[{model, crit}];
          sum += v;
          n += 1;
        }
      }
    }
    auto shuffled = scores;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const auto cells = aggregate(scores);
    const auto again = aggregate(shuffled);
    REQUIRE(cells.size() == oracle.size());
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const auto& [sum, n] = oracle.at({cells[i].model_id, cells[i].criterion_id});
      CHECK(cells[i].mean == Rational(sum, n));
      CHECK(cells[i].n == n);
      CHECK(again[i].mean == cells[i].mean);
      CHECK(format_cell(cells[i].mean) == long_division(sum, n));
    }
  }
}

TEST_CASE("report tables by kind and language") {
  ReportInput input;
  input.models = {{"m1", "Model One"}, {"m2", "Model Two"}};
  input.scenario_languages = {{"en1", dialog::Language::English}, {"el1", dialog::Language::Greek}};
  for (int r = 1; r <= 3; ++r) {
    input.scores.push_back(score("m1", "en1", "accuracy", "r" + std::to_string(r), r == 1 ? 4 : 5));
    input.scores.push_back(score("m2", "en1", "accuracy", "r" + std::to_string(r), r == 3 ? 3 : 4));
  }
  input.scores.push_back(score("m1", "en1", "coherence", "r1", 2));
  input.scores.push_back(score("m1", "el1", "operationality", "r1", 5));
  input.scores.push_back(score("m2", "el1", "operationality", "r1", 4));
  input.linguistics.push_back({"m1", "en1", dialog::Language::English, 1000, 10, 1500.0});
  input.linguistics.push_back({"m1", "en2", dialog::Language::English, 1001, 9, 500.0});
  input.linguistics.push_back({"m2", "en1", dialog::Language::English, 800, 10, std::nullopt});

  const auto doc = build_report(input);
  std::vector<std::string> slugs;
  for (const auto& t : doc.tables) slugs.push_back(t.slug());
  CHECK(slugs == std::vector<std::string>{"quantitative_en", "linguistic_en", "qualitative_el"});

  const auto& quant = doc.tables[0];
  CHECK(quant.title == "Quantitative evaluation (English)");
  REQUIRE(quant.rows.size() == 2);
  CHECK(quant.rows[0].criterion_id == "accuracy");
  CHECK(quant.rows[0].cells[0] == "4.66");
  CHECK(quant.rows[0].cells[1] == "3.66");
  CHECK(quant.rows[0].counts == std::vector<int>{3, 3});
  CHECK(quant.rows[1].cells[0] == "2");
  CHECK_FALSE(quant.rows[1].cells[1]);

  const auto& ling = doc.tables[1];
  REQUIRE(ling.rows.size() == 2);
  CHECK(ling.rows[0].cells[0] == "1000.5");
  CHECK(ling.rows[0].cells[1] == "800");
  CHECK(ling.rows[1].cells[0] == "9.5");
  CHECK(doc.mean_latency_ms.at("m1") == doctest::Approx(1000.0));
  CHECK_FALSE(doc.warnings.empty());

  const auto md = render_markdown(doc);
  CHECK(md.find("| Criterion | Model One | Model Two |") != std::string::npos);
  CHECK(md.find("| Coherence | 2 | - |") != std::string::npos);
  CHECK(md.find("## Warnings") != std::string::npos);

  const auto csv = render_table_csv(quant);
  CHECK(csv.rfind("criterion,m1,m2\n", 0) == 0);
  const auto parsed = parse_table_csv(csv);
  REQUIRE(parsed.rows.size() == 2);
  CHECK(parsed.rows[0].cells == quant.rows[0].cells);
  CHECK(parsed.rows[1].cells == quant.rows[1].cells);
  CHECK(render_json(doc).find("\"quantitative_en\"") != std::string::npos);
}

TEST_CASE("report edge cases") {
  CHECK_THROWS_AS(build_report({}), Error);
  ReportInput input;
  input.models = {{"m", "M"}};
  const auto doc = build_report(input);
  CHECK(doc.tables.empty());
  CHECK(render_markdown(doc).find("No data to report.") != std::string::npos);
  input.scores.push_back(score("m", "unknown-scn", "accuracy", "r", 3));
  CHECK_FALSE(build_report(input).warnings.empty());
}
