#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "semq/serialization.hpp"
#include "semq/sparql.hpp"
#include "support/oracles.hpp"

namespace semq {
namespace {

const char* kCollegeQuery =
    "PREFIX foaf: <http://xmlns.com/foaf/0.1/> SELECT ?college ?university WHERE { ?name "
    "foaf:college ?college . ?name foaf:universtity ?university . }";

Store college_store() {
  return Store(parse_turtle_subset(R"(
    @prefix foaf: <http://xmlns.com/foaf/0.1/> .
    _:me foaf:college "BVCOE" ; foaf:universtity "IP University" .
  )"));
}

ParseDiagnostic diagnostic_of(auto&& f, Errc expected) {
  try {
    f();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), expected) << e.what();
    EXPECT_TRUE(e.diagnostic().has_value());
    return e.diagnostic().value_or(ParseDiagnostic{});
  }
  ADD_FAILURE() << "no error thrown";
  return {};
}

TEST(ParseQuery, CollegeQuery) {
  const Query q = parse_query(kCollegeQuery);
  EXPECT_EQ(q.projection, (std::vector<std::string>{"college", "university"}));
  ASSERT_EQ(q.bgp.size(), 2u);
  EXPECT_EQ(std::get<Variable>(q.bgp[0].subject).name, "name");
  EXPECT_EQ(std::get<Variable>(q.bgp[1].subject).name, "name");
  EXPECT_EQ(std::get<Term>(q.bgp[1].predicate).iri().value(), "http://xmlns.com/foaf/0.1/universtity");
  EXPECT_NE(q.prefixes.find("foaf"), nullptr);
}

TEST(ParseQuery, MinimalAndAbbreviated) {
  const Query q = parse_query("SELECT ?x WHERE { ?x ?p ?o . }");
  EXPECT_EQ(q.bgp.size(), 1u);
  EXPECT_EQ(q.projection, std::vector<std::string>{"x"});

  const Query r = parse_query(
      "prefix ex: <http://e/>\nselect distinct $s ?n\n# comment\n{ ?s a ex:C ; ex:n ?n, \"x\"@en }");
  ASSERT_EQ(r.bgp.size(), 3u);
  EXPECT_EQ(std::get<Term>(r.bgp[0].predicate).iri(), rdf_type());
  EXPECT_EQ(std::get<Term>(r.bgp[2].object), Term(Literal::tagged("x", "en")));
}

TEST(ParseQuery, Errors) {
  diagnostic_of([] { parse_query("SELECT ?x WHERE { ?y <http://e/p> \"v\" . }"); },
                Errc::ProjectedVariableUnused);
  diagnostic_of([] { parse_query("SELECT WHERE { ?y ?p ?o }"); }, Errc::EmptyProjection);
  const auto d = diagnostic_of([] { parse_query("SELECT ?x WHERE {\n  ?x foaf:name ?n }"); },
                               Errc::UnknownPrefix);
  EXPECT_EQ(d.line, 2u);
  EXPECT_EQ(d.column, 6u);
  diagnostic_of([] { parse_query("SELECT ?x WHERE { ?x ?p }"); }, Errc::Syntax);
  diagnostic_of([] { parse_query("SELECT ?x WHERE { ?x ?p ?o"); }, Errc::Syntax);
  diagnostic_of([] { parse_query("SELECT ?x { ?x ?p ?o } LIMIT 3"); }, Errc::Syntax);
  diagnostic_of([] { parse_query("SELECT ?1x { ?1x ?p ?o }"); }, Errc::Syntax);
  diagnostic_of([] { parse_query("SELECT ?x { _:b ?p ?x }"); }, Errc::Syntax);
  diagnostic_of([] { parse_query("SELECT ?x { ?x \"p\" ?o }"); }, Errc::NonIriPredicate);
}

TEST(Evaluate, CollegeQueryOverCollegeGraph) {
  const auto result = evaluate(parse_query(kCollegeQuery), college_store());
  ASSERT_EQ(result.rows.size(), 1u);
  EXPECT_EQ(result.rows[0].at("college"), Term(Literal("BVCOE")));
  EXPECT_EQ(result.rows[0].at("university"), Term(Literal("IP University")));
}

TEST(Evaluate, EmptyStoreAndDedup) {
  EXPECT_TRUE(evaluate(parse_query(kCollegeQuery), Store{}).rows.empty());
  const Store store(parse_ntriples(
      "<http://e/a> <http://e/p> <http://e/x> .\n<http://e/a> <http://e/q> <http://e/y> .\n"
      "<http://e/b> <http://e/p> <http://e/x> .\n"));
  const auto result = evaluate(parse_query("SELECT ?s WHERE { ?s ?p ?o }"), store);
  ASSERT_EQ(result.rows.size(), 2u);
  EXPECT_EQ(result.rows[0].at("s").iri().value(), "http://e/a");
  EXPECT_EQ(result.rows[1].at("s").iri().value(), "http://e/b");
}

TEST(Evaluate, RepeatedVariableInOnePattern) {
  const Store store(parse_ntriples(
      "<http://e/a> <http://e/p> <http://e/a> .\n<http://e/a> <http://e/p> <http://e/b> .\n"));
  const auto result = evaluate(parse_query("SELECT ?x { ?x <http://e/p> ?x }"), store);
  ASSERT_EQ(result.rows.size(), 1u);
  EXPECT_EQ(result.rows[0].at("x").iri().value(), "http://e/a");
}

TEST(PlanBgp, OrdersBySelectivity) {
  std::string doc;
  for (int i = 0; i < 5; ++i) doc += "<http://e/s" + std::to_string(i) + "> <http://e/p1> <http://e/o> .\n";
  for (int i = 0; i < 2; ++i) doc += "<http://e/s" + std::to_string(i) + "> <http://e/p2> <http://e/o> .\n";
  const Store store(parse_ntriples(doc));
  ASSERT_EQ(store.count({std::nullopt, Term(make_iri("http://e/p1")), std::nullopt}), 5u);

  const Query q = parse_query("SELECT ?s { ?s <http://e/p1> ?o . ?s <http://e/p2> ?o }");
  const auto plan = plan_bgp(q, store);
  EXPECT_EQ(std::get<Term>(plan[0].predicate).iri().value(), "http://e/p2");
  EXPECT_EQ(std::get<Term>(plan[1].predicate).iri().value(), "http://e/p1");

  const Query bound = parse_query(
      "SELECT ?s { ?s ?p ?o . <http://e/s0> <http://e/p1> <http://e/o> . ?s <http://e/p2> ?o }");
  const auto plan2 = plan_bgp(bound, store);
  EXPECT_TRUE(std::holds_alternative<Term>(plan2[0].subject));
  EXPECT_TRUE(std::holds_alternative<Variable>(plan2[2].predicate));

  const Query single = parse_query("SELECT ?s { ?s ?p ?o }");
  EXPECT_EQ(plan_bgp(single, store).size(), 1u);
}

TEST(Evaluate, MatchesEnumerationOracleProperty) {
  semq::testing::Rng rng(1234);
  const auto alphabet = semq::testing::small_alphabet();
  for (int round = 0; round < 300; ++round) {
    const auto graph = semq::testing::random_small_graph(rng, alphabet, 100);
    const Store store(graph);
    const Query q = semq::testing::random_query(rng, alphabet);
    const auto expected = semq::testing::enumerate_solutions(q, graph, alphabet.all);
    const auto planned = evaluate(q, store, JoinOrder::planned);
    EXPECT_EQ(semq::testing::render_rows(planned), expected);
    EXPECT_EQ(semq::testing::render_rows(evaluate(q, store, JoinOrder::source)), expected);
    for (const auto& row : planned.rows) EXPECT_EQ(row.size(), q.projection.size());
  }
}

TEST(FormatSolutions, Csv) {
  const auto result = evaluate(parse_query(kCollegeQuery), college_store());
  EXPECT_EQ(format_solutions(result, ResultFormat::csv), "college,university\nBVCOE,IP University\n");
  SolutionSequence tricky{{"v"}, {Solution{{"v", Term(Literal("a,\"b\""))}}}};
  EXPECT_EQ(format_solutions(tricky, ResultFormat::csv), "v\n\"a,\"\"b\"\"\"\n");
}

TEST(FormatSolutions, TableHeaderOnlyWhenEmpty) {
  const auto result = evaluate(parse_query(kCollegeQuery), Store{});
  EXPECT_EQ(format_solutions(result, ResultFormat::table), "?college  ?university\n");
  const auto one = evaluate(parse_query(kCollegeQuery), college_store());
  EXPECT_EQ(format_solutions(one, ResultFormat::table),
            "?college  ?university\n\"BVCOE\"   \"IP University\"\n");
}

TEST(FormatSolutions, JsonSchema) {
  const Store store(parse_ntriples(
      "<http://e/a> <http://e/p> \"x\"@en .\n_:b <http://e/p> <http://e/c> .\n"));
  const auto result = evaluate(parse_query("SELECT ?s ?o { ?s <http://e/p> ?o }"), store);
  const auto j = nlohmann::json::parse(format_solutions(result, ResultFormat::json));
  EXPECT_EQ(j["vars"], nlohmann::json::array({"s", "o"}));
  ASSERT_EQ(j["rows"].size(), 2u);
  // Literal-bearing row sorts first: '<' precedes '_'.
  EXPECT_EQ(j["rows"][0]["s"]["type"], "iri");
  EXPECT_EQ(j["rows"][0]["s"]["value"], "http://e/a");
  EXPECT_EQ(j["rows"][0]["o"]["type"], "literal");
  EXPECT_EQ(j["rows"][0]["o"]["value"], "x");
  EXPECT_EQ(j["rows"][0]["o"]["xml:lang"], "en");
  EXPECT_EQ(j["rows"][1]["s"]["type"], "blank");
  EXPECT_EQ(j["rows"][1]["s"]["value"], "b");
  EXPECT_EQ(format_solutions(result, ResultFormat::json), format_solutions(result, ResultFormat::json));
}

TEST(Fixtures, CollegeQueryFile) {
  std::ifstream in(SEMQ_DATA_DIR "/college_query.rq");
  std::stringstream text;
  text << in.rdbuf();
  const Query q = parse_query(text.str());
  EXPECT_EQ(q.bgp.size(), 2u);
}

}  // namespace
}  // namespace semq
