// Copyright 2026 The Sieve Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace sieve {

// Root of the library's error hierarchy. Everything thrown on purpose by
// sieve derives from this; std exceptions escaping a sieve call are bugs.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A regex pattern uses a construct outside the supported subset. Raised at
// compile (parse) time, never during evaluation.
class PatternUnsupportedError : public Error {
 public:
  using Error::Error;
};

// A persisted document violates its schema. Carries a path into the
// document (e.g. "filters[2].expr.k") so callers can point at the field.
class SchemaError : public Error {
 public:
  SchemaError(const std::string& path, const std::string& message)
      : Error(path + ": " + message), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

class CapabilityMissingError : public Error {
 public:
  using Error::Error;
};

class ContextTooLongError : public Error {
 public:
  using Error::Error;
};

class RemoteUnavailableError : public Error {
 public:
  using Error::Error;
};

class EmptyCorpusError : public Error {
 public:
  using Error::Error;
};

// The oracle subprocess died, timed out, or broke protocol. Distinct from a
// well-formed invalid verdict: crashes are infrastructure, not signal.
class OracleCrashedError : public Error {
 public:
  using Error::Error;
};

class SearchSpaceTooLargeError : public Error {
 public:
  using Error::Error;
};

class SynthesizerUnavailableError : public Error {
 public:
  using Error::Error;
};

class EmptyInputError : public Error {
 public:
  using Error::Error;
};

class EmptyEvaluationError : public Error {
 public:
  using Error::Error;
};

// Residual mass at a trie node is zero; the caller must treat the node as
// banned.
class ZeroResidualError : public Error {
 public:
  using Error::Error;
};

// Internal trie invariant violation: a ban path addressed nodes that were
// never cached. Signals a decoder bug.
class PathNotFoundError : public Error {
 public:
  using Error::Error;
};

// Configuration / usage problems. The CLI maps these to exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Pipeline failures (exit code 3 in the CLI).
class PipelineError : public Error {
 public:
  using Error::Error;
};

}  // namespace sieve
