/*
   Copyright 2026 The Carve Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>

#include "carve/bytes.hpp"

namespace carve {

// Random-access, read-only view of an image. Implementations must allow
// concurrent view() calls from several threads.
class ByteSource {
  public:
    virtual ~ByteSource() = default;

    virtual std::uint64_t length() const noexcept = 0;

    // Returns bytes [offset, offset + count). The result either aliases
    // storage owned by the source or is read into `scratch`; it stays valid
    // while both are alive and `scratch` is not modified. Throws IoError if
    // the range is out of bounds or cannot be read.
    virtual ByteView view(std::uint64_t offset, std::size_t count, Bytes& scratch) const = 0;

    Bytes read(std::uint64_t offset, std::size_t count) const {
        Bytes scratch;
        auto v = view(offset, count, scratch);
        return Bytes(v.begin(), v.end());
    }
};

// Non-owning view over a buffer in memory.
class MemorySource final : public ByteSource {
  public:
    explicit MemorySource(ByteView data) : data_(data) {}

    std::uint64_t length() const noexcept override { return data_.size(); }
    ByteView view(std::uint64_t offset, std::size_t count, Bytes& scratch) const override;

  private:
    ByteView data_;
};

// Read-only memory mapping of a file.
class MappedFileSource final : public ByteSource {
  public:
    explicit MappedFileSource(const std::filesystem::path& path);
    ~MappedFileSource() override;

    MappedFileSource(const MappedFileSource&) = delete;
    MappedFileSource& operator=(const MappedFileSource&) = delete;

    std::uint64_t length() const noexcept override { return length_; }
    ByteView view(std::uint64_t offset, std::size_t count, Bytes& scratch) const override;

  private:
    const Byte* data_ = nullptr;
    std::uint64_t length_ = 0;
};

// Positional reads (pread) from a file or raw device; for images that
// cannot be mapped.
class FileSource final : public ByteSource {
  public:
    explicit FileSource(const std::filesystem::path& path);
    ~FileSource() override;

    FileSource(const FileSource&) = delete;
    FileSource& operator=(const FileSource&) = delete;

    std::uint64_t length() const noexcept override { return length_; }
    ByteView view(std::uint64_t offset, std::size_t count, Bytes& scratch) const override;

  private:
    int fd_ = -1;
    std::uint64_t length_ = 0;
};

// Prefers a mapping, falls back to positional reads.
std::unique_ptr<ByteSource> open_image(const std::filesystem::path& path);

std::string describe_range(std::uint64_t offset, std::size_t count);

}  // namespace carve
