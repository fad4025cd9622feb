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

#include "carve/byte_source.hpp"

#include <fcntl.h>
#include <sys/mman.h>
#include <sys/stat.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "carve/error.hpp"

namespace carve {

namespace {

void check_range(std::uint64_t length, std::uint64_t offset, std::size_t count) {
    if (offset > length || count > length - offset)
        throw IoError("cannot read " + describe_range(offset, count) + ": beyond end of image (" +
                      std::to_string(length) + " bytes)");
}

std::string errno_text() { return std::strerror(errno); }

struct Fd {
    int fd;
    ~Fd() {
        if (fd >= 0) ::close(fd);
    }
};

}  // namespace

std::string describe_range(std::uint64_t offset, std::size_t count) {
    return "bytes [" + std::to_string(offset) + ", " + std::to_string(offset + count) + ")";
}

ByteView MemorySource::view(std::uint64_t offset, std::size_t count, Bytes&) const {
    check_range(data_.size(), offset, count);
    return data_.subspan(offset, count);
}

MappedFileSource::MappedFileSource(const std::filesystem::path& path) {
    Fd f{::open(path.c_str(), O_RDONLY | O_CLOEXEC)};
    if (f.fd < 0) throw IoError("cannot open " + path.string() + ": " + errno_text());
    struct stat st {};
    if (::fstat(f.fd, &st) != 0) throw IoError("cannot stat " + path.string() + ": " + errno_text());
    if (!S_ISREG(st.st_mode)) throw IoError(path.string() + " is not a regular file");
    length_ = static_cast<std::uint64_t>(st.st_size);
    if (length_ == 0) return;
    void* p = ::mmap(nullptr, length_, PROT_READ, MAP_PRIVATE, f.fd, 0);
    if (p == MAP_FAILED) throw IoError("cannot map " + path.string() + ": " + errno_text());
    ::madvise(p, length_, MADV_SEQUENTIAL);
    data_ = static_cast<const Byte*>(p);
}

MappedFileSource::~MappedFileSource() {
    if (data_ != nullptr) ::munmap(const_cast<Byte*>(data_), length_);
}

ByteView MappedFileSource::view(std::uint64_t offset, std::size_t count, Bytes&) const {
    check_range(length_, offset, count);
    return {data_ + offset, count};
}

FileSource::FileSource(const std::filesystem::path& path) {
    fd_ = ::open(path.c_str(), O_RDONLY | O_CLOEXEC);
    if (fd_ < 0) throw IoError("cannot open " + path.string() + ": " + errno_text());
    off_t end = ::lseek(fd_, 0, SEEK_END);
    if (end < 0) {
        ::close(fd_);
        throw IoError("cannot size " + path.string() + ": " + errno_text());
    }
    length_ = static_cast<std::uint64_t>(end);
}

FileSource::~FileSource() {
    if (fd_ >= 0) ::close(fd_);
}

ByteView FileSource::view(std::uint64_t offset, std::size_t count, Bytes& scratch) const {
    check_range(length_, offset, count);
    scratch.resize(count);
    std::size_t done = 0;
    while (done < count) {
        ssize_t got = ::pread(fd_, scratch.data() + done, count - done, static_cast<off_t>(offset + done));
        if (got < 0 && errno == EINTR) continue;
        if (got <= 0)
            throw IoError("cannot read " + describe_range(offset, count) + ": " +
                          (got < 0 ? errno_text() : std::string("unexpected end of file")));
        done += static_cast<std::size_t>(got);
    }
    return {scratch.data(), count};
}

std::unique_ptr<ByteSource> open_image(const std::filesystem::path& path) {
    std::error_code ec;
    if (std::filesystem::is_regular_file(path, ec)) return std::make_unique<MappedFileSource>(path);
    return std::make_unique<FileSource>(path);
}

}  // namespace carve
