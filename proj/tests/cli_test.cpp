#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "semq/cli.hpp"

namespace semq {
namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(SEMQ_DATA_DIR) + "/" + name; }

class TempFile {
 public:
  TempFile(const std::string& name, const std::string& content)
      : path_(std::filesystem::temp_directory_path() / ("semq_cli_test_" + name)) {
    std::ofstream(path_) << content;
  }
  ~TempFile() { std::filesystem::remove(path_); }
  std::string path() const { return path_.string(); }

 private:
  std::filesystem::path path_;
};

TEST(CliLoad, Summary) {
  const auto r = run({"load", data("foaf.nt")});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "triples     3\nsubjects    3\npredicates  3\nobjects     3\n");
  const auto j = run({"--format", "json", "load", data("foaf.nt"), data("foaf.ttl")});
  EXPECT_EQ(nlohmann::json::parse(j.out)["triples"], 3);
  EXPECT_EQ(run({"load", data("foaf.nt"), "--format", "csv"}).out,
            "triples,subjects,predicates,objects\n3,3,3,3\n");
}

TEST(CliLoad, FixtureFileMatchesLineCount) {
  std::ifstream in(data("universities.nt"));
  std::stringstream text;
  text << in.rdbuf();
  const auto s = text.str();
  const auto lines = std::count(s.begin(), s.end(), '\n');
  const auto r = run({"load", "--format", "json", data("universities.nt")});
  EXPECT_EQ(nlohmann::json::parse(r.out)["triples"], lines);
}

TEST(CliLoad, EmptyAndMalformed) {
  TempFile empty("empty.nt", "");
  EXPECT_EQ(run({"load", empty.path()}).out.substr(0, 13), "triples     0");
  TempFile bad("bad.nt", "<http://e/a> <http://e/b> <http://e/c> .\n\n<http://e/a> <http://e/b> .\n");
  const auto r = run({"load", bad.path()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find(bad.path() + ":3:27: error"), std::string::npos) << r.err;
  EXPECT_TRUE(r.out.empty());
  EXPECT_EQ(run({"load", "/nonexistent/file.nt"}).code, 1);
}

TEST(CliSparql, CollegeQueryCsv) {
  const auto r = run({"sparql", "--format", "csv", "-f", data("college_query.rq"), data("college_foaf.ttl")});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "college,university\nBVCOE,IP University\n");
}

TEST(CliSparql, EmptyGraphAndBrokenQuery) {
  const auto r = run({"sparql", "-q", "SELECT ?s WHERE { ?s ?p ?o }"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "?s\n");
  const auto broken = run({"sparql", "-q", "SELECT ?s WHERE { ?s ?p }"});
  EXPECT_EQ(broken.code, 1);
  EXPECT_NE(broken.err.find("query:1:25"), std::string::npos) << broken.err;
  EXPECT_EQ(run({"sparql"}).code, 2);
  EXPECT_EQ(run({"sparql", "-q", "x", "-f", "y"}).code, 2);
}

TEST(CliSearch, WorkedExampleJson) {
  const auto r = run({"search", "Indian Universities", "--fixture", "--total-pages", "8820000",
                      "--discard-fraction", "0.15"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["retained_estimate"], 7497000);
  EXPECT_EQ(j["expansion"][0]["keyword"], "ugc");
  EXPECT_EQ(j["expansion"][0]["rank"], 1);
}

TEST(CliSearch, CorpusFileAgreesWithFixture) {
  const auto a = run({"search", "Indian Universities", "--fixture"});
  const auto b = run({"search", "Indian Universities", "--corpus", data("search_example.jsonl")});
  EXPECT_EQ(b.code, 0) << b.err;
  EXPECT_EQ(a.out, b.out);
}

TEST(CliSearch, NoMatchesAndUsageErrors) {
  const auto r = run({"search", "zzz", "--fixture"});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(nlohmann::json::parse(r.out)["candidates"].empty());
  EXPECT_EQ(run({"search", "x", "--fixture", "--total-pages", "10", "--discard-fraction", "1.5"}).code, 2);
  EXPECT_EQ(run({"search", "x", "--fixture", "--total-pages", "10"}).code, 2);
  EXPECT_EQ(run({"search", "x"}).code, 2);
  EXPECT_EQ(run({"search", "x", "--fixture", "--corpus", "y"}).code, 2);
  EXPECT_EQ(run({"search", "x", "--fixture", "--format", "xml"}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(CliSearch, TableAndCsv) {
  const auto t = run({"search", "Indian Universities", "--fixture", "--format", "table", "--top-k", "1"});
  EXPECT_NE(t.out.find("1. ugc (4)"), std::string::npos) << t.out;
  const auto documents = t.out.substr(t.out.find("documents:\n"));
  EXPECT_EQ(documents, "documents:\n  search1  17\n");
  const auto c = run({"search", "Indian Universities", "--fixture", "--format", "csv"});
  EXPECT_EQ(c.out.substr(0, 29), "rank,keyword,count\n1,ugc,4\n2,");
}

TEST(CliSearch, CorpusErrors) {
  TempFile bad("bad.jsonl", "{\"id\": \"a\", \"keywords\": []}\nnot json\n");
  const auto r = run({"search", "x", "--corpus", bad.path()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find(bad.path() + ":2:1"), std::string::npos) << r.err;
}

TEST(CliOntology, ShowDotTriples) {
  const auto show = run({"ontology", "show", "--fixture"});
  EXPECT_EQ(show.code, 0);
  EXPECT_NE(show.out.find("classes: 5\n"), std::string::npos) << show.out;
  EXPECT_NE(show.out.find("individuals: 19\n"), std::string::npos);
  EXPECT_NE(show.out.find("    Colleges (7 asserted, 7 inferred)"), std::string::npos);
  EXPECT_NE(show.out.find("  Universities (3 asserted, 10 inferred)"), std::string::npos);

  const auto dot = run({"ontology", "dot", "--fixture"});
  EXPECT_NE(dot.out.find("owl:Thing"), std::string::npos);
  EXPECT_NE(run({"ontology", "dot", "--fixture", "--instances"}).out.find("BVCOE"), std::string::npos);

  const auto triples = run({"ontology", "triples", "--fixture"});
  TempFile nt("fixture.nt", triples.out);
  const auto loaded = run({"load", "--format", "json", nt.path()});
  EXPECT_EQ(nlohmann::json::parse(loaded.out)["triples"],
            std::count(triples.out.begin(), triples.out.end(), '\n'));
  // Reading the exported graph back gives the same ontology.
  EXPECT_EQ(run({"ontology", "show", nt.path()}).out, show.out);
  EXPECT_EQ(run({"ontology", "show"}).code, 2);
  EXPECT_EQ(run({"ontology", "draw", "--fixture"}).code, 2);
}

TEST(Cli, ByteStableOutput) {
  const std::vector<std::string> args{"search", "Indian Universities", "--fixture"};
  EXPECT_EQ(run(args).out, run(args).out);
  const std::vector<std::string> q{"sparql", "--format", "json", "-f", data("college_query.rq"),
                                   data("college_foaf.ttl")};
  EXPECT_EQ(run(q).out, run(q).out);
}

}  // namespace
}  // namespace semq
