#pragma once

#include <stdexcept>

namespace isv {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// raster
struct IoError : Error { using Error::Error; };
struct UnsupportedFormat : Error { using Error::Error; };
struct CorruptFile : Error { using Error::Error; };
struct OutOfBounds : Error { using Error::Error; };

// wavelet
struct InvalidLevels : Error { using Error::Error; };
struct ShapeMismatch : Error { using Error::Error; };
struct UnknownFamily : Error { using Error::Error; };

// isom
struct DimensionMismatch : Error { using Error::Error; };
struct EmptyInput : Error { using Error::Error; };
struct IndexOutOfRange : Error { using Error::Error; };

// entropy
struct EmptyAlphabet : Error { using Error::Error; };
struct UnknownSymbol : Error { using Error::Error; };
struct CorruptTable : Error { using Error::Error; };

// codec container
struct BadMagic : Error { using Error::Error; };
struct VersionMismatch : Error { using Error::Error; };
struct CorruptStream : Error { using Error::Error; };

// metrics
struct ZeroOriginalSize : Error { using Error::Error; };

} // namespace isv
