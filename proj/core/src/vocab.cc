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

#include "qafid/vocab.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "qafid/errors.h"
#include "qafid/text.h"

namespace qafid {
namespace {

constexpr std::string_view kMatrixMagic = "EMB1";
constexpr size_t kMatrixHeaderBytes = 4 + 8 + 8;

// Counts lead bytes, so ill-formed byte tokens still get a length.
size_t CountCodePoints(std::string_view s) {
  return static_cast<size_t>(std::count_if(s.begin(), s.end(), [](char c) {
    return (static_cast<unsigned char>(c) & 0xC0) != 0x80;
  }));
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("read failed: " + path);
  return buf.str();
}

void WriteFile(const std::string& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) throw IoError("write failed: " + path);
}

void PutU64(std::string& out, uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

uint64_t GetU64(std::string_view bytes, size_t at) {
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) {
    v |= static_cast<uint64_t>(static_cast<unsigned char>(bytes[at + i])) << (8 * i);
  }
  return v;
}

void FillNormal(std::span<float> row, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, kRandomInitStddev);
  for (float& v : row) v = static_cast<float>(normal(rng));
}

}  // namespace

Vocabulary::Vocabulary(std::vector<std::string> tokens) {
  tokens_.reserve(tokens.size());
  for (std::string& t : tokens) {
    if (t.empty()) throw std::invalid_argument("empty token");
    if (index_.contains(t)) {
      throw std::invalid_argument("duplicate token '" + t + "'");
    }
    Add(std::move(t));
  }
}

Vocabulary Vocabulary::Load(const std::string& path) {
  const std::string content = ReadFile(path);
  Vocabulary vocab;
  size_t start = 0;
  size_t line_no = 0;
  while (start < content.size()) {
    size_t end = content.find('\n', start);
    if (end == std::string::npos) end = content.size();
    ++line_no;
    std::string token = content.substr(start, end - start);
    if (token.empty()) {
      throw ValidationError(path + ":" + std::to_string(line_no) +
                            ": empty token");
    }
    if (!vocab.Add(token)) {
      throw ValidationError(path + ":" + std::to_string(line_no) +
                            ": duplicate token '" + token + "'");
    }
    start = end + 1;
  }
  return vocab;
}

void Vocabulary::Save(const std::string& path) const {
  std::string out;
  for (const std::string& t : tokens_) {
    out += t;
    out.push_back('\n');
  }
  WriteFile(path, out);
}

std::optional<size_t> Vocabulary::Find(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool Vocabulary::Add(std::string token) {
  if (token.empty() || index_.contains(token)) return false;
  max_token_chars_ = std::max(max_token_chars_, CountCodePoints(token));
  index_.emplace(token, tokens_.size());
  tokens_.push_back(std::move(token));
  return true;
}

EmbeddingMatrix::EmbeddingMatrix(size_t rows, size_t dim)
    : rows_(rows), dim_(dim), values_(rows * dim, 0.0f) {}

EmbeddingMatrix::EmbeddingMatrix(size_t rows, size_t dim,
                                 std::vector<float> values)
    : rows_(rows), dim_(dim), values_(std::move(values)) {
  if (dim != 0 && rows > values_.max_size() / dim) {
    throw std::invalid_argument("matrix shape overflows");
  }
  if (values_.size() != rows * dim) {
    throw std::invalid_argument("matrix has " + std::to_string(values_.size()) +
                                " values, expected rows*dim = " +
                                std::to_string(rows * dim));
  }
  for (float v : values_) {
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite value");
  }
}

EmbeddingMatrix EmbeddingMatrix::FromBytes(std::string_view bytes) {
  if (bytes.size() < kMatrixHeaderBytes || !bytes.starts_with(kMatrixMagic)) {
    throw ValidationError("not an EMB1 matrix");
  }
  const uint64_t rows = GetU64(bytes, 4);
  const uint64_t dim = GetU64(bytes, 12);
  const uint64_t payload = bytes.size() - kMatrixHeaderBytes;
  if (dim != 0 && rows > payload / 4 / dim) {
    throw ValidationError("matrix payload shorter than header shape");
  }
  if (rows * dim * 4 != payload) {
    throw ValidationError("matrix payload is " + std::to_string(payload) +
                          " bytes, header declares " +
                          std::to_string(rows * dim * 4));
  }
  std::vector<float> values(rows * dim);
  for (size_t k = 0; k < values.size(); ++k) {
    const size_t at = kMatrixHeaderBytes + 4 * k;
    uint32_t bits = 0;
    for (int i = 0; i < 4; ++i) {
      bits |= static_cast<uint32_t>(static_cast<unsigned char>(bytes[at + i]))
              << (8 * i);
    }
    values[k] = std::bit_cast<float>(bits);
  }
  try {
    return EmbeddingMatrix(rows, dim, std::move(values));
  } catch (const std::invalid_argument& e) {
    throw ValidationError(e.what());
  }
}

std::string EmbeddingMatrix::ToBytes() const {
  std::string out;
  out.reserve(kMatrixHeaderBytes + 4 * values_.size());
  out.append(kMatrixMagic);
  PutU64(out, rows_);
  PutU64(out, dim_);
  for (float v : values_) {
    const auto bits = std::bit_cast<uint32_t>(v);
    for (int i = 0; i < 4; ++i) {
      out.push_back(static_cast<char>((bits >> (8 * i)) & 0xFF));
    }
  }
  return out;
}

EmbeddingMatrix EmbeddingMatrix::Load(const std::string& path) {
  return FromBytes(ReadFile(path));
}

void EmbeddingMatrix::Save(const std::string& path) const {
  WriteFile(path, ToBytes());
}

std::span<float> EmbeddingMatrix::row(size_t r) {
  if (r >= rows_) throw std::out_of_range("row " + std::to_string(r));
  return std::span<float>(values_).subspan(r * dim_, dim_);
}

std::span<const float> EmbeddingMatrix::row(size_t r) const {
  if (r >= rows_) throw std::out_of_range("row " + std::to_string(r));
  return std::span<const float>(values_).subspan(r * dim_, dim_);
}

void EmbeddingMatrix::AppendRow(std::span<const float> row) {
  if (row.size() != dim_) throw std::invalid_argument("row width mismatch");
  values_.insert(values_.end(), row.begin(), row.end());
  ++rows_;
}

bool EmbeddingMatrix::BitIdentical(const EmbeddingMatrix& other) const {
  return rows_ == other.rows_ && dim_ == other.dim_ &&
         std::memcmp(values_.data(), other.values_.data(),
                     values_.size() * sizeof(float)) == 0;
}

std::vector<TokenPiece> SegmentToken(std::string_view token,
                                     const Vocabulary& base,
                                     std::optional<size_t> fallback) {
  if (base.empty()) throw std::invalid_argument("empty base vocabulary");
  if (token.empty()) throw std::invalid_argument("empty token");
  if (fallback && *fallback >= base.size()) {
    throw std::invalid_argument("fallback index out of range");
  }

  // Byte offset of every code point boundary, including the end.
  std::vector<size_t> bounds;
  {
    const std::u32string cells = DecodeUtf8(token);
    bounds.reserve(cells.size() + 1);
    size_t offset = 0;
    bounds.push_back(0);
    for (CodePoint c : cells) {
      offset += c < 0x80 ? 1 : c < 0x800 ? 2 : c < 0x10000 ? 3 : 4;
      bounds.push_back(offset);
    }
  }
  const size_t n = bounds.size() - 1;

  std::vector<TokenPiece> pieces;
  size_t pos = 0;
  while (pos < n) {
    bool matched = false;
    for (size_t len = std::min(base.max_token_chars(), n - pos); len >= 1; --len) {
      std::string_view piece =
          token.substr(bounds[pos], bounds[pos + len] - bounds[pos]);
      if (std::optional<size_t> idx = base.Find(piece)) {
        pieces.push_back({*idx, std::string(piece), false});
        pos += len;
        matched = true;
        break;
      }
    }
    if (matched) continue;
    std::string_view cp = token.substr(bounds[pos], bounds[pos + 1] - bounds[pos]);
    if (!fallback) {
      throw DecompositionError("no base token covers '" + std::string(cp) +
                               "' in '" + std::string(token) + "'");
    }
    pieces.push_back({*fallback, std::string(cp), true});
    ++pos;
  }
  return pieces;
}

std::vector<size_t> Decompose(std::string_view token, const Vocabulary& base,
                              std::optional<size_t> fallback) {
  std::vector<size_t> out;
  for (const TokenPiece& p : SegmentToken(token, base, fallback)) {
    out.push_back(p.index);
  }
  return out;
}

ExtensionResult ExtendVocabulary(const Vocabulary& base,
                                 const EmbeddingMatrix& matrix,
                                 std::span<const std::string> new_tokens,
                                 InitMode mode, uint64_t seed,
                                 std::optional<size_t> fallback) {
  if (matrix.rows() != base.size()) {
    throw std::invalid_argument(
        "matrix has " + std::to_string(matrix.rows()) + " rows but base has " +
        std::to_string(base.size()) + " tokens");
  }
  ExtensionResult result{base, matrix, {}};
  std::mt19937_64 rng(seed);
  std::vector<double> acc(matrix.dim());
  std::vector<float> row(matrix.dim());

  for (const std::string& token : new_tokens) {
    if (token.empty()) throw std::invalid_argument("empty new token");
    if (result.vocab.Find(token)) {
      result.skipped.push_back(token);
      continue;
    }
    if (mode == InitMode::kMean) {
      const std::vector<size_t> parts = Decompose(token, base, fallback);
      std::fill(acc.begin(), acc.end(), 0.0);
      for (size_t idx : parts) {
        std::span<const float> src = matrix.row(idx);
        for (size_t d = 0; d < acc.size(); ++d) acc[d] += src[d];
      }
      for (size_t d = 0; d < acc.size(); ++d) {
        row[d] = static_cast<float>(acc[d] / static_cast<double>(parts.size()));
      }
    } else {
      FillNormal(row, rng);
    }
    result.vocab.Add(token);
    result.matrix.AppendRow(row);
  }
  return result;
}

std::vector<size_t> IdentifyCjkTokens(const Vocabulary& vocab) {
  std::vector<size_t> out;
  for (size_t i = 0; i < vocab.size(); ++i) {
    std::u32string cells;
    try {
      cells = DecodeUtf8(vocab.token(i));
    } catch (const std::invalid_argument&) {
      continue;  // raw byte tokens carry no code points
    }
    if (std::any_of(cells.begin(), cells.end(), IsCjkCodePoint)) {
      out.push_back(i);
    }
  }
  return out;
}

EmbeddingMatrix RandomizeTokenEmbeddings(EmbeddingMatrix matrix,
                                         std::span<const size_t> indices,
                                         uint64_t seed) {
  for (size_t idx : indices) {
    if (idx >= matrix.rows()) {
      throw std::out_of_range("row index " + std::to_string(idx) +
                              " out of range (" +
                              std::to_string(matrix.rows()) + " rows)");
    }
  }
  std::mt19937_64 rng(seed);
  for (size_t idx : indices) FillNormal(matrix.row(idx), rng);
  return matrix;
}

}  // namespace qafid
