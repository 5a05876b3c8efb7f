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

#include <stdexcept>
#include <string>

namespace regraph {

enum class ErrorKind {
  // graph import / serialization
  MalformedFile,
  EmptyExport,
  DanglingEdge,
  IoFailure,
  // vectorizer
  EmptyCorpus,
  Oversized,
  VersionMismatch,
  MalformedLine,
  // pipeline
  EmptyRoot,
  ToolFailure,
  Timeout,
  MissingFixture,
  StageOrder,
  AllJobsFailed,
  // model
  DimensionMismatch,
  ZeroVariance,
  NoPositivePairs,
  NonFiniteLoss,
  VersionUnknown,
  CorruptFile,
  // matcher
  VocabModelMismatch,
  // eval
  EmptyDataset,
  MissingTruth,
  EmptyCell,
  InvalidArgument,
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::MalformedFile: return "MalformedFile";
    case ErrorKind::EmptyExport: return "EmptyExport";
    case ErrorKind::DanglingEdge: return "DanglingEdge";
    case ErrorKind::IoFailure: return "IoFailure";
    case ErrorKind::EmptyCorpus: return "EmptyCorpus";
    case ErrorKind::Oversized: return "Oversized";
    case ErrorKind::VersionMismatch: return "VersionMismatch";
    case ErrorKind::MalformedLine: return "MalformedLine";
    case ErrorKind::EmptyRoot: return "EmptyRoot";
    case ErrorKind::ToolFailure: return "ToolFailure";
    case ErrorKind::Timeout: return "Timeout";
    case ErrorKind::MissingFixture: return "MissingFixture";
    case ErrorKind::StageOrder: return "StageOrder";
    case ErrorKind::AllJobsFailed: return "AllJobsFailed";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::ZeroVariance: return "ZeroVariance";
    case ErrorKind::NoPositivePairs: return "NoPositivePairs";
    case ErrorKind::NonFiniteLoss: return "NonFiniteLoss";
    case ErrorKind::VersionUnknown: return "VersionUnknown";
    case ErrorKind::CorruptFile: return "CorruptFile";
    case ErrorKind::VocabModelMismatch: return "VocabModelMismatch";
    case ErrorKind::EmptyDataset: return "EmptyDataset";
    case ErrorKind::MissingTruth: return "MissingTruth";
    case ErrorKind::EmptyCell: return "EmptyCell";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Domain error carrying a machine-checkable kind next to the human message.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace regraph
