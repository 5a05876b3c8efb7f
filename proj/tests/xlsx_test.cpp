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

#include "regraph/xlsx.hpp"

#include <gtest/gtest.h>
#include <zlib.h>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "support/test_util.hpp"

namespace regraph {
namespace {

using testutil::TempDir;

std::uint16_t rd16(const std::string& b, std::size_t at) {
  return static_cast<std::uint16_t>(static_cast<unsigned char>(b[at]) |
                                    (static_cast<unsigned char>(b[at + 1]) << 8));
}

std::uint32_t rd32(const std::string& b, std::size_t at) {
  return static_cast<std::uint32_t>(static_cast<unsigned char>(b[at]) |
                                    (static_cast<unsigned char>(b[at + 1]) << 8) |
                                    (static_cast<unsigned char>(b[at + 2]) << 16) |
                                    (static_cast<unsigned char>(b[at + 3]) << 24));
}

struct ZipEntry {
  std::string content;
  std::uint32_t crc = 0;
  std::uint16_t method = 0;
  std::uint16_t dos_time = 0;
  std::uint16_t dos_date = 0;
};

// Enough of a zip reader for stored-only archives written by us.
std::map<std::string, ZipEntry> parse_zip(const std::string& bytes) {
  std::map<std::string, ZipEntry> entries;
  std::size_t at = 0;
  while (at + 4 <= bytes.size() && rd32(bytes, at) == 0x04034b50) {
    ZipEntry e;
    e.method = rd16(bytes, at + 8);
    e.dos_time = rd16(bytes, at + 10);
    e.dos_date = rd16(bytes, at + 12);
    e.crc = rd32(bytes, at + 14);
    std::uint32_t size = rd32(bytes, at + 18);
    std::uint16_t name_len = rd16(bytes, at + 26);
    std::uint16_t extra_len = rd16(bytes, at + 28);
    std::string name = bytes.substr(at + 30, name_len);
    e.content = bytes.substr(at + 30 + name_len + extra_len, size);
    entries[name] = std::move(e);
    at += 30 + name_len + extra_len + size;
  }
  return entries;
}

std::vector<std::vector<std::string>> sample_rows() {
  return {{"target_function", "rank", "score"},
          {"f<int, int>", "1", "0.921"},
          {"a&b<c>\"d'", "2", "-2.000"}};
}

TEST(XlsxTest, ArchiveHasCanonicalLayout) {
  TempDir tmp;
  write_xlsx(sample_rows(), tmp / "r.xlsx");
  auto bytes = testutil::read_file(tmp / "r.xlsx");
  ASSERT_GE(bytes.size(), 22u);
  EXPECT_EQ(bytes.substr(0, 4), std::string("PK\x03\x04", 4));

  auto entries = parse_zip(bytes);
  ASSERT_EQ(entries.size(), 5u);
  EXPECT_TRUE(entries.count("[Content_Types].xml"));
  EXPECT_TRUE(entries.count("_rels/.rels"));
  EXPECT_TRUE(entries.count("xl/workbook.xml"));
  EXPECT_TRUE(entries.count("xl/_rels/workbook.xml.rels"));
  EXPECT_TRUE(entries.count("xl/worksheets/sheet1.xml"));

  // End-of-central-directory record agrees with the entry count.
  std::size_t eocd = bytes.rfind(std::string("PK\x05\x06", 4));
  ASSERT_NE(eocd, std::string::npos);
  EXPECT_EQ(rd16(bytes, eocd + 10), 5u);
}

TEST(XlsxTest, EntriesAreStoredWithValidChecksums) {
  TempDir tmp;
  write_xlsx(sample_rows(), tmp / "r.xlsx");
  auto entries = parse_zip(testutil::read_file(tmp / "r.xlsx"));
  for (const auto& [name, e] : entries) {
    EXPECT_EQ(e.method, 0u) << name;  // stored, no compression
    auto crc = static_cast<std::uint32_t>(
        ::crc32(0, reinterpret_cast<const Bytef*>(e.content.data()),
                static_cast<uInt>(e.content.size())));
    EXPECT_EQ(e.crc, crc) << name;
  }
}

TEST(XlsxTest, TimestampsArePinned) {
  TempDir tmp;
  write_xlsx(sample_rows(), tmp / "r.xlsx");
  auto entries = parse_zip(testutil::read_file(tmp / "r.xlsx"));
  for (const auto& [name, e] : entries) {
    EXPECT_EQ(e.dos_date, xlsx_detail::kDosDate) << name;
    EXPECT_EQ(e.dos_time, 0u) << name;
  }
}

TEST(XlsxTest, WritesAreByteDeterministic) {
  TempDir tmp;
  write_xlsx(sample_rows(), tmp / "a.xlsx");
  write_xlsx(sample_rows(), tmp / "b.xlsx");
  EXPECT_EQ(testutil::read_file(tmp / "a.xlsx"), testutil::read_file(tmp / "b.xlsx"));
}

TEST(XlsxTest, SheetCarriesEscapedInlineStrings) {
  TempDir tmp;
  write_xlsx(sample_rows(), tmp / "r.xlsx");
  auto entries = parse_zip(testutil::read_file(tmp / "r.xlsx"));
  const std::string& sheet = entries.at("xl/worksheets/sheet1.xml").content;

  EXPECT_NE(sheet.find("<row r=\"1\">"), std::string::npos);
  EXPECT_NE(sheet.find("<c r=\"A1\" t=\"inlineStr\"><is><t>target_function</t></is></c>"),
            std::string::npos);
  EXPECT_NE(sheet.find("<c r=\"C2\" t=\"inlineStr\"><is><t>0.921</t></is></c>"),
            std::string::npos);
  EXPECT_NE(sheet.find("f&lt;int, int&gt;"), std::string::npos);
  EXPECT_NE(sheet.find("a&amp;b&lt;c&gt;&quot;d&apos;"), std::string::npos);
  EXPECT_EQ(sheet.find("f<int"), std::string::npos);

  const std::string& workbook = entries.at("xl/workbook.xml").content;
  EXPECT_NE(workbook.find("<sheet name=\"matches\""), std::string::npos);
}

TEST(XlsxTest, ColumnNamesExtendPastZ) {
  using xlsx_detail::column_name;
  EXPECT_EQ(column_name(0), "A");
  EXPECT_EQ(column_name(25), "Z");
  EXPECT_EQ(column_name(26), "AA");
  EXPECT_EQ(column_name(27), "AB");
  EXPECT_EQ(column_name(51), "AZ");
  EXPECT_EQ(column_name(52), "BA");
  EXPECT_EQ(column_name(701), "ZZ");
  EXPECT_EQ(column_name(702), "AAA");
}

TEST(XlsxTest, RefusesUnwritablePath) {
  EXPECT_THROW(write_xlsx(sample_rows(), "/nonexistent/dir/r.xlsx"), Error);
}

}  // namespace
}  // namespace regraph
