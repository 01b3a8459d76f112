#pragma once

#include <string>
#include <utility>
#include <variant>

namespace raisf {

enum class Errc {
    EmptyQuestion,
    EmptyDocument,
    EmptyCorpus,
    EmptyQuery,
    InvalidParams,
    InvalidConfig,
    InvalidTrace,
    UnparsableVerdict,
    UnparsableRelevance,
    EmptyDecomposition,
    MissingTemplateInput,
    BackendUnavailable,
    BackendRefusal,
    IoError,
};

const char* errc_name(Errc c);

struct Error {
    Errc code;
    std::string message;
};

inline Error make_error(Errc code, std::string message) {
    return Error{code, std::move(message)};
}

template <typename T>
class Result {
public:
    Result(T value) : value_(std::move(value)) {}
    Result(Error error) : value_(std::move(error)) {}

    bool ok() const { return std::holds_alternative<T>(value_); }
    explicit operator bool() const { return ok(); }

    T& value() & { return std::get<T>(value_); }
    const T& value() const& { return std::get<T>(value_); }
    T&& value() && { return std::get<T>(std::move(value_)); }

    const Error& error() const { return std::get<Error>(value_); }

private:
    std::variant<T, Error> value_;
};

// Operations that succeed without producing a value.
using Status = Result<std::monostate>;

inline Status ok_status() {
    return Status(std::monostate{});
}

} // namespace raisf
