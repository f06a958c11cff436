// Copyright 2026 The seizeval Authors
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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace seizeval {

enum class ErrorKind {
    boundary,
    alignment,
    validation,
    domain,
    capacity,
    parse,
    format,
    lookup,
    schema,
    training,
    precondition,
    io,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Base error for the library. what() reads "<module>: <kind> error: <message>".
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string_view module, const std::string& message);

    ErrorKind kind() const noexcept { return kind_; }
    const std::string& module() const noexcept { return module_; }

private:
    ErrorKind kind_;
    std::string module_;
};

[[noreturn]] void fail(ErrorKind kind, std::string_view module, const std::string& message);

}  // namespace seizeval
