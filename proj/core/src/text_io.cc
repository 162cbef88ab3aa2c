// Copyright 2026 The ctrnet Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ctrnet/text_io.h"

#include <openssl/evp.h>
#include <zlib.h>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ctrnet/error.h"

namespace ctrnet {

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw Error("format_double: conversion failed");
  return std::string(buf, ptr);
}

std::optional<double> parse_double(std::string_view text) {
  if (text.empty()) return std::nullopt;
  // from_chars rejects a leading '+', which is fine for this format.
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
  if (!std::isfinite(value)) return std::nullopt;
  return value;
}

std::optional<std::uint64_t> parse_u64(std::string_view text) {
  if (text.empty()) return std::nullopt;
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

std::vector<std::string_view> split_on(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.push_back(text.substr(start));
      return parts;
    }
    parts.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string_view trim(std::string_view text) {
  const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!text.empty() && is_space(text.front())) text.remove_prefix(1);
  while (!text.empty() && is_space(text.back())) text.remove_suffix(1);
  return text;
}

bool has_gz_suffix(const std::filesystem::path& path) {
  return path.extension() == ".gz";
}

struct LineReader::Impl {
  gzFile file = nullptr;
};

LineReader::LineReader(const std::filesystem::path& path) : impl_(std::make_unique<Impl>()) {
  impl_->file = gzopen(path.c_str(), "rb");
  if (impl_->file == nullptr) throw IoError("cannot open " + path.string());
  gzbuffer(impl_->file, 1 << 17);
}

LineReader::~LineReader() {
  if (impl_ && impl_->file != nullptr) gzclose(impl_->file);
}

bool LineReader::next(std::string& line) {
  line.clear();
  char buf[8192];
  bool any = false;
  while (gzgets(impl_->file, buf, sizeof(buf)) != nullptr) {
    any = true;
    line.append(buf);
    if (!line.empty() && line.back() == '\n') break;
  }
  if (!any) {
    int err = 0;
    const char* msg = gzerror(impl_->file, &err);
    if (err != Z_OK && err != Z_STREAM_END) throw IoError(std::string("read failed: ") + msg);
    return false;
  }
  if (!line.empty() && line.back() == '\n') line.pop_back();
  if (!line.empty() && line.back() == '\r') line.pop_back();
  ++line_number_;
  return true;
}

struct LineWriter::Impl {
  std::filesystem::path target;
  std::filesystem::path temp;
  bool gz = false;
  gzFile gz_file = nullptr;
  std::ofstream plain;
  bool committed = false;
};

LineWriter::LineWriter(const std::filesystem::path& path) : impl_(std::make_unique<Impl>()) {
  impl_->target = path;
  impl_->temp = path;
  impl_->temp += ".tmp";
  impl_->gz = has_gz_suffix(path);
  if (impl_->gz) {
    impl_->gz_file = gzopen(impl_->temp.c_str(), "wb6");
    if (impl_->gz_file == nullptr) throw IoError("cannot create " + impl_->temp.string());
  } else {
    impl_->plain.open(impl_->temp, std::ios::binary | std::ios::trunc);
    if (!impl_->plain) throw IoError("cannot create " + impl_->temp.string());
  }
}

LineWriter::~LineWriter() {
  if (!impl_ || impl_->committed) return;
  if (impl_->gz_file != nullptr) gzclose(impl_->gz_file);
  impl_->plain.close();
  std::error_code ec;
  std::filesystem::remove(impl_->temp, ec);
}

void LineWriter::write_line(std::string_view line) {
  if (impl_->gz) {
    if (!line.empty() &&
        gzwrite(impl_->gz_file, line.data(), static_cast<unsigned>(line.size())) == 0) {
      throw IoError("gzip write failed: " + impl_->temp.string());
    }
    if (gzputc(impl_->gz_file, '\n') == -1) throw IoError("gzip write failed");
  } else {
    impl_->plain.write(line.data(), static_cast<std::streamsize>(line.size()));
    impl_->plain.put('\n');
    if (!impl_->plain) throw IoError("write failed: " + impl_->temp.string());
  }
}

void LineWriter::commit() {
  if (impl_->gz) {
    if (gzclose(impl_->gz_file) != Z_OK) throw IoError("gzip close failed");
    impl_->gz_file = nullptr;
  } else {
    impl_->plain.close();
    if (!impl_->plain) throw IoError("close failed: " + impl_->temp.string());
  }
  std::filesystem::rename(impl_->temp, impl_->target);
  impl_->committed = true;
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  LineReader reader(path);
  std::vector<std::string> lines;
  std::string line;
  while (reader.next(line)) lines.push_back(line);
  return lines;
}

void write_text_atomic(const std::filesystem::path& path, std::string_view contents) {
  std::filesystem::path temp = path;
  temp += ".tmp";
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot create " + temp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw IoError("write failed: " + temp.string());
  }
  std::filesystem::rename(temp, path);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof(buf));
    if (in.gcount() > 0) EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, digest, &len);
  EVP_MD_CTX_free(ctx);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) {
    hex.push_back(kHex[digest[i] >> 4]);
    hex.push_back(kHex[digest[i] & 0xf]);
  }
  return hex;
}

}  // namespace ctrnet
