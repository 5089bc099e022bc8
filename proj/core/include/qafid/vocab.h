// Copyright 2026 The qafid Authors.
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

// Tokenizer vocabulary extension with mean-embedding initialization of the
// new rows, plus random re-initialization for ablations.
//
// File formats:
//   vocabulary  UTF-8, one token per line, LF endings; line number = index.
//   matrix      "EMB1", u64 rows, u64 dim (little endian), then rows*dim
//               IEEE-754 binary32 little-endian values, row-major.

#ifndef QAFID_VOCAB_H_
#define QAFID_VOCAB_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace qafid {

class Vocabulary {
 public:
  Vocabulary() = default;
  // Throws std::invalid_argument on duplicate or empty tokens.
  explicit Vocabulary(std::vector<std::string> tokens);

  static Vocabulary Load(const std::string& path);
  void Save(const std::string& path) const;

  size_t size() const { return tokens_.size(); }
  bool empty() const { return tokens_.empty(); }
  const std::string& token(size_t i) const { return tokens_.at(i); }
  std::span<const std::string> tokens() const { return tokens_; }
  std::optional<size_t> Find(std::string_view token) const;

  // Appends unless already present. Returns whether it was added.
  bool Add(std::string token);

  // Length in code points of the longest token.
  size_t max_token_chars() const { return max_token_chars_; }

  friend bool operator==(const Vocabulary& l, const Vocabulary& r) {
    return l.tokens_ == r.tokens_;
  }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, size_t> index_;
  size_t max_token_chars_ = 0;
};

class EmbeddingMatrix {
 public:
  EmbeddingMatrix() = default;
  EmbeddingMatrix(size_t rows, size_t dim);
  // Throws std::invalid_argument if values.size() != rows * dim or a value is
  // not finite.
  EmbeddingMatrix(size_t rows, size_t dim, std::vector<float> values);

  static EmbeddingMatrix Load(const std::string& path);
  void Save(const std::string& path) const;
  static EmbeddingMatrix FromBytes(std::string_view bytes);
  std::string ToBytes() const;

  size_t rows() const { return rows_; }
  size_t dim() const { return dim_; }
  std::span<float> row(size_t r);
  std::span<const float> row(size_t r) const;
  std::span<const float> values() const { return values_; }

  void AppendRow(std::span<const float> row);

  // Bitwise comparison, so NaN payloads and signed zeros count.
  bool BitIdentical(const EmbeddingMatrix& other) const;

 private:
  size_t rows_ = 0;
  size_t dim_ = 0;
  std::vector<float> values_;
};

class DecompositionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TokenPiece {
  size_t index = 0;
  std::string text;  // the consumed part of the token
  bool fallback = false;
};

// Greedy longest-match segmentation of `token` into base tokens, left to
// right. A code point no base token starts with maps to `fallback`; without a
// fallback it throws DecompositionError. Throws std::invalid_argument for an
// empty base vocabulary or token.
std::vector<TokenPiece> SegmentToken(std::string_view token,
                                     const Vocabulary& base,
                                     std::optional<size_t> fallback = {});

std::vector<size_t> Decompose(std::string_view token, const Vocabulary& base,
                              std::optional<size_t> fallback = {});

enum class InitMode { kMean, kRandom };

// Normal(0, kRandomInitStddev) rows for random initialization.
inline constexpr double kRandomInitStddev = 0.02;

struct ExtensionResult {
  Vocabulary vocab;
  EmbeddingMatrix matrix;
  std::vector<std::string> skipped;  // duplicates of base or earlier tokens
};

// Base rows are copied unchanged; each accepted new token gets the mean of
// its decomposition rows (kMean) or seeded Normal(0, 0.02) samples (kRandom).
ExtensionResult ExtendVocabulary(const Vocabulary& base,
                                 const EmbeddingMatrix& matrix,
                                 std::span<const std::string> new_tokens,
                                 InitMode mode, uint64_t seed,
                                 std::optional<size_t> fallback = {});

// Tokens with at least one CJK code point (see IsCjkCodePoint).
std::vector<size_t> IdentifyCjkTokens(const Vocabulary& vocab);

// Replaces the listed rows with seeded Normal(0, 0.02) samples. Throws
// std::out_of_range for an index past the last row.
EmbeddingMatrix RandomizeTokenEmbeddings(EmbeddingMatrix matrix,
                                         std::span<const size_t> indices,
                                         uint64_t seed);

}  // namespace qafid

#endif  // QAFID_VOCAB_H_
