// Copyright 2026 The tqt Authors
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

#include "tqt/error.hpp"

namespace tqt {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonHermitianInput: return "NonHermitianInput";
    case ErrorCode::NonUnitaryInput: return "NonUnitaryInput";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::IncommensurableOperators: return "IncommensurableOperators";
    case ErrorCode::TrivialContextExcluded: return "TrivialContextExcluded";
    case ErrorCode::EmptyPoset: return "EmptyPoset";
    case ErrorCode::ContextNotInPoset: return "ContextNotInPoset";
    case ErrorCode::NotASubcontext: return "NotASubcontext";
    case ErrorCode::StageMismatch: return "StageMismatch";
    case ErrorCode::ElementNotInFibre: return "ElementNotInFibre";
    case ErrorCode::ParentMismatch: return "ParentMismatch";
    case ErrorCode::NotOuterForm: return "NotOuterForm";
    case ErrorCode::UndefinedOperation: return "UndefinedOperation";
    case ErrorCode::EmptyFilter: return "EmptyFilter";
    case ErrorCode::PosetNotClosedUnderU: return "PosetNotClosedUnderU";
    case ErrorCode::NonMonotoneMap: return "NonMonotoneMap";
    case ErrorCode::InvalidWitness: return "InvalidWitness";
    case ErrorCode::OperatorNotInScope: return "OperatorNotInScope";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::UnknownCommand: return "UnknownCommand";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace tqt
