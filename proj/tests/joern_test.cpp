// Copyright 2026 The Regraph Authors
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

#include "regraph/joern.hpp"

#include <gtest/gtest.h>

#include <json.hpp>
#include <string>
#include <vector>

#include "support/test_util.hpp"

namespace regraph {
namespace {

using nlohmann::json;
using testutil::TempDir;

json vertex(std::int64_t id, const std::string& label,
            const std::map<std::string, std::string>& props = {}) {
  json v;
  v["id"] = id;
  v["label"] = label;
  if (!props.empty()) {
    json p = json::object();
    for (const auto& [name, value] : props) p[name] = value;
    v["properties"] = std::move(p);
  }
  return v;
}

json edge(const std::string& label, std::int64_t out_v, std::int64_t in_v) {
  return json{{"label", label}, {"outV", out_v}, {"inV", in_v}};
}

std::string doc(std::vector<json> vertices, std::vector<json> edges) {
  json g;
  g["vertices"] = std::move(vertices);
  g["edges"] = std::move(edges);
  return g.dump();
}

std::vector<json> method_skeleton(std::int64_t base, const std::string& name) {
  return {
      vertex(base, "METHOD", {{"NAME", name}, {"ADDRESS", "400"}}),
      vertex(base + 1, "BLOCK"),
  };
}

std::vector<json> skeleton_edges(std::int64_t base) {
  return {edge("AST", base, base + 1)};
}

TEST(JoernMappingTest, DataFilePinsHeaderTables) {
  auto text = testutil::read_file(testutil::data_dir() / "joern_mapping.json");
  EXPECT_EQ(json::parse(text), json(joern_mapping_json()));
}

TEST(JoernImportTest, ImportsFixtureExports) {
  auto x86 = import_joern_graphson(testutil::fixture_dir() /
                                   "tree/openplc/x86/O0/plc_app.bin.cpg.json");
  ASSERT_EQ(x86.functions.size(), 3u);
  EXPECT_NO_THROW(validate_corpus(x86));

  EXPECT_EQ(x86.functions[0].function_name, "__time_sub");
  EXPECT_EQ(x86.functions[1].function_name, "__time_add");
  EXPECT_EQ(x86.functions[2].function_name, "__normalize_timespec");
  EXPECT_EQ(x86.functions[0].address, "154");
  EXPECT_EQ(x86.functions[1].address, "104");
  EXPECT_EQ(x86.functions[2].address, "74");

  const auto& sub = x86.functions[0];
  int calls = 0, operators = 0, cfg_edges = 0;
  bool saw_callee = false, saw_assignment = false;
  for (const auto& n : sub.nodes) {
    if (n.kind == NodeKind::Call) {
      ++calls;
      if (n.op_token == "__normalize_timespec") saw_callee = true;
    }
    if (n.kind == NodeKind::Operator) {
      ++operators;
      if (n.op_token == "assignment") saw_assignment = true;
      EXPECT_EQ(n.op_token.find("<operator>"), std::string::npos);
    }
  }
  for (const auto& e : sub.edges)
    if (e.type == EdgeType::Cfg) ++cfg_edges;
  EXPECT_GE(calls, 1);
  EXPECT_TRUE(saw_callee);
  EXPECT_GE(operators, 5);
  EXPECT_TRUE(saw_assignment);
  EXPECT_GE(cfg_edges, 1);

  auto arm = import_joern_graphson(testutil::fixture_dir() /
                                   "tree/openplc/arm/O3/plc_app.bin.cpg.json");
  ASSERT_EQ(arm.functions.size(), 3u);
  EXPECT_NO_THROW(validate_corpus(arm));
  EXPECT_EQ(arm.functions[0].function_name, "__time_sub");
  EXPECT_EQ(arm.functions[0].address, "1a20");
  EXPECT_LT(arm.functions[0].nodes.size(), sub.nodes.size());  // leaner build
}

TEST(JoernImportTest, AcceptsEnvelopedAndPlainForms) {
  // Same two-node graph, once in plain GraphSON and once with every value
  // wrapped in @type/@value envelopes and a numeric-string id.
  auto plain = parse_joern_graphson(doc(method_skeleton(7, "f"), skeleton_edges(7)), "t");

  json mv;
  mv["id"] = json{{"@type", "g:Int64"}, {"@value", "7"}};
  mv["label"] = "METHOD";
  mv["properties"]["NAME"] = json::array(
      {json{{"@type", "g:VertexProperty"},
            {"@value", json{{"id", 1}, {"value", "f"}, {"label", "prop"}}}}});
  mv["properties"]["ADDRESS"] = json::array(
      {json{{"@type", "g:VertexProperty"},
            {"@value", json{{"id", 2}, {"value", "400"}, {"label", "prop"}}}}});
  json bv;
  bv["id"] = json{{"@type", "g:Int64"}, {"@value", 8}};
  bv["label"] = "BLOCK";
  json ev;
  ev["label"] = "AST";
  ev["outV"] = json{{"@type", "g:Int64"}, {"@value", 7}};
  ev["inV"] = json{{"@type", "g:Int64"}, {"@value", "8"}};
  json g;
  g["@type"] = "tinker:graph";
  g["@value"]["vertices"] = json::array({json{{"@type", "g:Vertex"}, {"@value", mv}}, bv});
  g["@value"]["edges"] = json::array({json{{"@type", "g:Edge"}, {"@value", ev}}});

  auto wrapped = parse_joern_graphson(g.dump(), "t");
  ASSERT_EQ(plain.functions.size(), 1u);
  ASSERT_EQ(wrapped.functions.size(), 1u);
  EXPECT_TRUE(structurally_equal(plain.functions[0], wrapped.functions[0]));
  EXPECT_EQ(wrapped.functions[0].function_name, "f");
  EXPECT_EQ(wrapped.functions[0].address, "400");
}

TEST(JoernImportTest, NormalizesOperatorCalls) {
  auto verts = method_skeleton(1, "f");
  verts.push_back(vertex(3, "CALL", {{"NAME", "<operator>.assignment"}, {"CODE", "a = b"}}));
  verts.push_back(vertex(4, "CALL", {{"NAME", "memcpy"}, {"CODE", "memcpy(a,b,4)"}}));
  auto es = skeleton_edges(1);
  es.push_back(edge("AST", 2, 3));
  es.push_back(edge("AST", 2, 4));

  auto corpus = parse_joern_graphson(doc(verts, es), "t");
  ASSERT_EQ(corpus.functions.size(), 1u);
  const auto& g = corpus.functions[0];
  ASSERT_EQ(g.nodes.size(), 4u);
  EXPECT_EQ(g.nodes[2].kind, NodeKind::Operator);
  EXPECT_EQ(g.nodes[2].op_token, "assignment");
  EXPECT_EQ(g.nodes[3].kind, NodeKind::Call);
  EXPECT_EQ(g.nodes[3].op_token, "memcpy");
}

TEST(JoernImportTest, RemapsSparseIdsDensely) {
  std::vector<json> verts = {
      vertex(5000, "METHOD", {{"NAME", "f"}, {"ADDRESS", "400"}}),
      vertex(9999, "BLOCK"),
      vertex(123, "RETURN"),
  };
  std::vector<json> es = {edge("AST", 5000, 9999), edge("AST", 9999, 123),
                          edge("CFG", 5000, 123)};
  auto corpus = parse_joern_graphson(doc(verts, es), "t");
  const auto& g = corpus.functions[0];
  ASSERT_EQ(g.nodes.size(), 3u);
  // dense ids follow ascending original id: 123 -> 0, 5000 -> 1, 9999 -> 2
  EXPECT_EQ(g.nodes[0].kind, NodeKind::Return);
  EXPECT_EQ(g.nodes[1].kind, NodeKind::Method);
  EXPECT_EQ(g.nodes[2].kind, NodeKind::Block);
  for (const auto& n : g.nodes) EXPECT_LT(n.id, 3);
}

TEST(JoernImportTest, RejectsDuplicateVertexIds) {
  auto verts = method_skeleton(1, "f");
  verts.push_back(vertex(2, "BLOCK"));  // id 2 already used by the skeleton
  try {
    parse_joern_graphson(doc(verts, skeleton_edges(1)), "t");
    FAIL() << "expected Error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::MalformedFile);
    EXPECT_NE(std::string(e.what()).find("duplicate vertex id 2"), std::string::npos);
  }
}

TEST(JoernImportTest, RejectsEdgesToMissingVertices) {
  auto es = skeleton_edges(1);
  es.push_back(edge("CFG", 1, 777));
  try {
    parse_joern_graphson(doc(method_skeleton(1, "f"), es), "t");
    FAIL() << "expected Error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DanglingEdge);
    EXPECT_NE(std::string(e.what()).find("777"), std::string::npos);
  }
}

TEST(JoernImportTest, DropsCrossFunctionEdges) {
  auto verts = method_skeleton(1, "f");
  auto other = method_skeleton(10, "g");
  verts.insert(verts.end(), other.begin(), other.end());
  auto es = skeleton_edges(1);
  auto es2 = skeleton_edges(10);
  es.insert(es.end(), es2.begin(), es2.end());
  es.push_back(edge("CFG", 2, 11));  // f's block to g's block

  auto corpus = parse_joern_graphson(doc(verts, es), "t");
  ASSERT_EQ(corpus.functions.size(), 2u);
  for (const auto& g : corpus.functions)
    for (const auto& e : g.edges) EXPECT_NE(e.type, EdgeType::Cfg);
}

TEST(JoernImportTest, DropsUnmappedEdgeLabels) {
  auto es = skeleton_edges(1);
  es.push_back(edge("CONTAINS", 1, 2));
  es.push_back(edge("SOURCE_FILE", 2, 666));  // unmapped labels skip id checks too
  auto corpus = parse_joern_graphson(doc(method_skeleton(1, "f"), es), "t");
  EXPECT_EQ(corpus.functions[0].edges.size(), 1u);
}

TEST(JoernImportTest, MapsUnknownNodeLabelsToUnknown) {
  auto verts = method_skeleton(1, "f");
  verts.push_back(vertex(3, "TYPE_DECL_XYZ"));
  auto es = skeleton_edges(1);
  es.push_back(edge("AST", 2, 3));
  auto corpus = parse_joern_graphson(doc(verts, es), "t");
  ASSERT_EQ(corpus.functions[0].nodes.size(), 3u);
  EXPECT_EQ(corpus.functions[0].nodes[2].kind, NodeKind::Unknown);
}

TEST(JoernImportTest, CollapsesDuplicateEdges) {
  auto es = skeleton_edges(1);
  es.push_back(edge("AST", 1, 2));
  es.push_back(edge("CFG", 1, 2));
  auto corpus = parse_joern_graphson(doc(method_skeleton(1, "f"), es), "t");
  EXPECT_EQ(corpus.functions[0].edges.size(), 2u);  // one AST + one CFG survive
}

TEST(JoernImportTest, DropsVerticesUnreachableFromAnyMethod) {
  auto verts = method_skeleton(1, "f");
  verts.push_back(vertex(50, "LITERAL"));  // floating, no AST path from METHOD
  auto corpus = parse_joern_graphson(doc(verts, skeleton_edges(1)), "t");
  EXPECT_EQ(corpus.functions[0].nodes.size(), 2u);
}

TEST(JoernImportTest, AddressFallsBackToHexVertexId) {
  std::vector<json> verts = {vertex(255, "METHOD", {{"NAME", "f"}}),
                             vertex(256, "BLOCK")};
  auto corpus = parse_joern_graphson(doc(verts, {edge("AST", 255, 256)}), "t");
  EXPECT_EQ(corpus.functions[0].address, "ff");
}

TEST(JoernImportTest, RejectsExportsWithoutMethods) {
  std::vector<json> verts = {vertex(1, "BLOCK"), vertex(2, "LITERAL")};
  try {
    parse_joern_graphson(doc(verts, {edge("AST", 1, 2)}), "t");
    FAIL() << "expected Error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::EmptyExport);
  }
}

TEST(JoernImportTest, RejectsMalformedDocuments) {
  try {
    parse_joern_graphson("{not json", "origin.json");
    FAIL() << "expected Error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::MalformedFile);
    EXPECT_NE(std::string(e.what()).find("origin.json"), std::string::npos);
  }

  try {
    parse_joern_graphson(R"({"nodes": []})", "t");
    FAIL() << "expected Error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::MalformedFile);
    EXPECT_NE(std::string(e.what()).find("vertices"), std::string::npos);
  }

  EXPECT_THROW(import_joern_graphson("/nonexistent/export.json"), Error);
}

TEST(CpgFormatTest, DetectsAndDispatchesBothFormats) {
  TempDir tmp;

  auto graphson_path = tmp / "export.cpg.json";
  testutil::write_file(graphson_path, doc(method_skeleton(1, "f"), skeleton_edges(1)));
  EXPECT_EQ(detect_cpg_format(graphson_path), CpgFormat::JOERN_GRAPHSON);

  FunctionCorpus canonical;
  canonical.functions.push_back(testutil::tiny_function());
  auto canonical_path = tmp / "graph.json";
  serialize_corpus(canonical, canonical_path);
  EXPECT_EQ(detect_cpg_format(canonical_path), CpgFormat::GRAPH_JSON);

  auto from_graphson = import_cpg_export(graphson_path, CpgFormat::JOERN_GRAPHSON);
  EXPECT_EQ(from_graphson.functions.size(), 1u);
  auto from_canonical = import_cpg_export(canonical_path, CpgFormat::GRAPH_JSON);
  EXPECT_EQ(from_canonical.functions.size(), 1u);

  auto fixture = testutil::fixture_dir() / "tree/openplc/x86/O0/plc_app.bin.cpg.json";
  EXPECT_EQ(detect_cpg_format(fixture), CpgFormat::JOERN_GRAPHSON);

  testutil::write_file(tmp / "odd.json", R"({"neither": true})");
  try {
    detect_cpg_format(tmp / "odd.json");
    FAIL() << "expected Error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::MalformedFile);
  }
  EXPECT_THROW(detect_cpg_format(tmp / "missing.json"), Error);
}

}  // namespace
}  // namespace regraph
