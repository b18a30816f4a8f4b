#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

namespace mscale {

// Streaming SHA-256, used to fingerprint input files in reports.
class Sha256 {
public:
    Sha256();
    void update(const void* data, std::size_t len);
    std::string hexDigest();  // finalizes; further update() is invalid

private:
    void processBlock(const std::uint8_t* block);

    std::uint32_t state_[8];
    std::uint8_t buffer_[64];
    std::size_t bufferLen_ = 0;
    std::uint64_t totalBits_ = 0;
    bool done_ = false;
};

std::string sha256Hex(const std::string& bytes);
std::string sha256File(const std::string& path);  // throws if unreadable

}  // namespace mscale
