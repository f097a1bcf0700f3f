#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace pbtzero {

class CheckpointError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Little-endian binary writer/reader with a running FNV-1a checksum. Every
// container in the project (weights, population meta, replay spill) is
// magic + version + payload + checksum, so truncation and bit corruption are
// detected on load instead of producing garbage state.

class BinWriter {
public:
    void u8(uint8_t v) { put(&v, 1); }
    void u32(uint32_t v) { put_le(v); }
    void u64(uint64_t v) { put_le(v); }
    void i64(int64_t v) { put_le(static_cast<uint64_t>(v)); }
    void f32(float v) {
        uint32_t bits;
        std::memcpy(&bits, &v, 4);
        put_le(bits);
    }
    void f64(double v) {
        uint64_t bits;
        std::memcpy(&bits, &v, 8);
        put_le(bits);
    }
    void bytes(const void* data, size_t count) { put(data, count); }
    void str(const std::string& s) {
        u32(static_cast<uint32_t>(s.size()));
        put(s.data(), s.size());
    }

    // Appends the checksum of everything written so far.
    void finish() {
        uint64_t h = hash_;
        put_le(h);
    }

    const std::vector<uint8_t>& data() const { return buf_; }

    void write_file(const std::string& path) const {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw CheckpointError("cannot open " + path + " for writing");
        out.write(reinterpret_cast<const char*>(buf_.data()), buf_.size());
        if (!out) throw CheckpointError("failed writing " + path);
    }

private:
    template <typename T>
    void put_le(T v) {
        uint8_t tmp[sizeof(T)];
        for (size_t i = 0; i < sizeof(T); ++i) tmp[i] = static_cast<uint8_t>(v >> (8 * i));
        put(tmp, sizeof(T));
    }
    void put(const void* data, size_t count) {
        const uint8_t* p = static_cast<const uint8_t*>(data);
        buf_.insert(buf_.end(), p, p + count);
        for (size_t i = 0; i < count; ++i) {
            hash_ ^= p[i];
            hash_ *= 0x100000001b3ULL;
        }
    }

    std::vector<uint8_t> buf_;
    uint64_t hash_ = 0xcbf29ce484222325ULL;
};

class BinReader {
public:
    explicit BinReader(std::vector<uint8_t> data) : buf_(std::move(data)) {
        if (buf_.size() < 8) throw CheckpointError("file truncated");
        // checksum of all bytes except the trailing hash
        uint64_t h = 0xcbf29ce484222325ULL;
        for (size_t i = 0; i + 8 < buf_.size(); ++i) {
            h ^= buf_[i];
            h *= 0x100000001b3ULL;
        }
        uint64_t stored = 0;
        for (size_t i = 0; i < 8; ++i)
            stored |= static_cast<uint64_t>(buf_[buf_.size() - 8 + i]) << (8 * i);
        if (h != stored) throw CheckpointError("checksum mismatch (corrupt or truncated file)");
        end_ = buf_.size() - 8;
    }

    static BinReader from_file(const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw CheckpointError("cannot open " + path);
        std::vector<uint8_t> data((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
        return BinReader(std::move(data));
    }

    uint8_t u8() {
        need(1);
        return buf_[pos_++];
    }
    uint32_t u32() { return take_le<uint32_t>(); }
    uint64_t u64() { return take_le<uint64_t>(); }
    int64_t i64() { return static_cast<int64_t>(take_le<uint64_t>()); }
    float f32() {
        uint32_t bits = take_le<uint32_t>();
        float v;
        std::memcpy(&v, &bits, 4);
        return v;
    }
    double f64() {
        uint64_t bits = take_le<uint64_t>();
        double v;
        std::memcpy(&v, &bits, 8);
        return v;
    }
    std::string str() {
        uint32_t count = u32();
        need(count);
        std::string s(reinterpret_cast<const char*>(buf_.data() + pos_), count);
        pos_ += count;
        return s;
    }
    void bytes(void* out, size_t count) {
        need(count);
        std::memcpy(out, buf_.data() + pos_, count);
        pos_ += count;
    }
    bool at_end() const { return pos_ == end_; }

private:
    template <typename T>
    T take_le() {
        need(sizeof(T));
        T v = 0;
        for (size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(buf_[pos_ + i]) << (8 * i);
        pos_ += sizeof(T);
        return v;
    }
    void need(size_t count) {
        if (pos_ + count > end_) throw CheckpointError("file truncated");
    }

    std::vector<uint8_t> buf_;
    size_t pos_ = 0;
    size_t end_ = 0;
};

}  // namespace pbtzero
