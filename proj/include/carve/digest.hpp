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

#include <memory>
#include <string>

#include "carve/byte_source.hpp"
#include "carve/bytes.hpp"

namespace carve {

// Incremental SHA-256.
class Sha256 {
  public:
    Sha256();
    ~Sha256();
    Sha256(Sha256&&) noexcept;
    Sha256& operator=(Sha256&&) noexcept;

    void update(ByteView bytes);
    // 64 lowercase hex characters. The object must not be reused afterwards.
    std::string finish_hex();

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

std::string sha256_hex(ByteView bytes);

// Digest of source bytes [offset, offset + count), read in blocks.
std::string sha256_hex(const ByteSource& source, std::uint64_t offset, std::uint64_t count);

inline std::string sha256_hex(const ByteSource& source) { return sha256_hex(source, 0, source.length()); }

}  // namespace carve
