#pragma once

#include <stdexcept>
#include <string>

namespace bridge {

// Root of all throwing error paths. Receive-side code never throws; malformed
// input on a receiver is an event or a counter, not an exception.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MessageTooLarge : Error {
    using Error::Error;
};

struct MalformedMessage : Error {
    using Error::Error;
};

struct BadMagic : Error {
    using Error::Error;
};

struct TruncatedChunk : Error {
    using Error::Error;
};

struct TruncatedPacket : Error {
    using Error::Error;
};

struct BadVersion : Error {
    using Error::Error;
};

struct PayloadTooLarge : Error {
    using Error::Error;
};

struct InvalidRate : Error {
    using Error::Error;
};

struct MissingOffer : Error {
    using Error::Error;
};

// Covers MalformedOffer / MalformedAnswer.
struct SdpError : Error {
    using Error::Error;
};

struct BadUrl : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

struct ScenarioFailed : Error {
    using Error::Error;
};

} // namespace bridge
