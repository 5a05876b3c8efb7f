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

#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <zlib.h>

#include "regraph/errors.hpp"

// Minimal OOXML spreadsheet writer: one sheet, every cell an inline string,
// packaged as a stored (uncompressed) zip. Timestamps are pinned so identical
// reports produce byte-identical files.

namespace regraph {

namespace xlsx_detail {

// 2020-01-01 00:00:00 in MS-DOS date/time encoding
inline constexpr std::uint16_t kDosDate = ((2020 - 1980) << 9) | (1 << 5) | 1;
inline constexpr std::uint16_t kDosTime = 0;

inline void put16(std::string& out, std::uint16_t v) {
  out += static_cast<char>(v & 0xff);
  out += static_cast<char>((v >> 8) & 0xff);
}

inline void put32(std::string& out, std::uint32_t v) {
  out += static_cast<char>(v & 0xff);
  out += static_cast<char>((v >> 8) & 0xff);
  out += static_cast<char>((v >> 16) & 0xff);
  out += static_cast<char>((v >> 24) & 0xff);
}

struct ZipWriter {
  std::string buffer;
  std::string central;
  int entries = 0;

  void add(const std::string& name, const std::string& content) {
    std::uint32_t crc = static_cast<std::uint32_t>(
        ::crc32(0, reinterpret_cast<const Bytef*>(content.data()),
                static_cast<uInt>(content.size())));
    std::uint32_t size = static_cast<std::uint32_t>(content.size());
    std::uint32_t offset = static_cast<std::uint32_t>(buffer.size());

    put32(buffer, 0x04034b50);
    put16(buffer, 20);        // version needed
    put16(buffer, 0);         // flags
    put16(buffer, 0);         // method: stored
    put16(buffer, kDosTime);
    put16(buffer, kDosDate);
    put32(buffer, crc);
    put32(buffer, size);
    put32(buffer, size);
    put16(buffer, static_cast<std::uint16_t>(name.size()));
    put16(buffer, 0);         // extra length
    buffer += name;
    buffer += content;

    put32(central, 0x02014b50);
    put16(central, 20);       // version made by
    put16(central, 20);       // version needed
    put16(central, 0);
    put16(central, 0);
    put16(central, kDosTime);
    put16(central, kDosDate);
    put32(central, crc);
    put32(central, size);
    put32(central, size);
    put16(central, static_cast<std::uint16_t>(name.size()));
    put16(central, 0);        // extra
    put16(central, 0);        // comment
    put16(central, 0);        // disk
    put16(central, 0);        // internal attrs
    put32(central, 0);        // external attrs
    put32(central, offset);
    central += name;
    ++entries;
  }

  std::string finish() {
    std::uint32_t cd_offset = static_cast<std::uint32_t>(buffer.size());
    std::uint32_t cd_size = static_cast<std::uint32_t>(central.size());
    buffer += central;
    put32(buffer, 0x06054b50);
    put16(buffer, 0);
    put16(buffer, 0);
    put16(buffer, static_cast<std::uint16_t>(entries));
    put16(buffer, static_cast<std::uint16_t>(entries));
    put32(buffer, cd_size);
    put32(buffer, cd_offset);
    put16(buffer, 0);         // comment length
    return std::move(buffer);
  }
};

inline std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += ch;
    }
  }
  return out;
}

inline std::string column_name(int idx) {
  std::string name;
  for (int n = idx; n >= 0; n = n / 26 - 1) {
    name.insert(name.begin(), static_cast<char>('A' + n % 26));
    if (n < 26) break;
  }
  return name;
}

}  // namespace xlsx_detail

/// Writes `rows` (first row usually a header) as a single-sheet workbook.
inline void write_xlsx(const std::vector<std::vector<std::string>>& rows,
                       const std::filesystem::path& path) {
  using namespace xlsx_detail;

  std::string sheet =
      "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"yes\"?>\n"
      "<worksheet xmlns=\"http://schemas.openxmlformats.org/spreadsheetml/2006/main\">"
      "<sheetData>";
  for (std::size_t r = 0; r < rows.size(); ++r) {
    sheet += "<row r=\"" + std::to_string(r + 1) + "\">";
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      sheet += "<c r=\"" + column_name(static_cast<int>(c)) + std::to_string(r + 1) +
               "\" t=\"inlineStr\"><is><t>" + xml_escape(rows[r][c]) + "</t></is></c>";
    }
    sheet += "</row>";
  }
  sheet += "</sheetData></worksheet>";

  static const char* content_types =
      "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"yes\"?>\n"
      "<Types xmlns=\"http://schemas.openxmlformats.org/package/2006/content-types\">"
      "<Default Extension=\"rels\" "
      "ContentType=\"application/vnd.openxmlformats-package.relationships+xml\"/>"
      "<Default Extension=\"xml\" ContentType=\"application/xml\"/>"
      "<Override PartName=\"/xl/workbook.xml\" "
      "ContentType=\"application/vnd.openxmlformats-officedocument.spreadsheetml.sheet.main+"
      "xml\"/>"
      "<Override PartName=\"/xl/worksheets/sheet1.xml\" "
      "ContentType=\"application/vnd.openxmlformats-officedocument.spreadsheetml.worksheet+"
      "xml\"/></Types>";

  static const char* root_rels =
      "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"yes\"?>\n"
      "<Relationships xmlns=\"http://schemas.openxmlformats.org/package/2006/relationships\">"
      "<Relationship Id=\"rId1\" "
      "Type=\"http://schemas.openxmlformats.org/officeDocument/2006/relationships/"
      "officeDocument\" Target=\"xl/workbook.xml\"/></Relationships>";

  static const char* workbook =
      "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"yes\"?>\n"
      "<workbook xmlns=\"http://schemas.openxmlformats.org/spreadsheetml/2006/main\" "
      "xmlns:r=\"http://schemas.openxmlformats.org/officeDocument/2006/relationships\">"
      "<sheets><sheet name=\"matches\" sheetId=\"1\" r:id=\"rId1\"/></sheets></workbook>";

  static const char* workbook_rels =
      "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"yes\"?>\n"
      "<Relationships xmlns=\"http://schemas.openxmlformats.org/package/2006/relationships\">"
      "<Relationship Id=\"rId1\" "
      "Type=\"http://schemas.openxmlformats.org/officeDocument/2006/relationships/worksheet\" "
      "Target=\"worksheets/sheet1.xml\"/></Relationships>";

  ZipWriter zip;
  zip.add("[Content_Types].xml", content_types);
  zip.add("_rels/.rels", root_rels);
  zip.add("xl/workbook.xml", workbook);
  zip.add("xl/_rels/workbook.xml.rels", workbook_rels);
  zip.add("xl/worksheets/sheet1.xml", sheet);

  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoFailure, "cannot open " + path.string() + " for writing");
  std::string bytes = zip.finish();
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorKind::IoFailure, "short write to " + path.string());
}

}  // namespace regraph
