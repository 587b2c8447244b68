/* Copyright 2026 The sggbench Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#ifndef SGG_CHECKSUM_H_
#define SGG_CHECKSUM_H_

#include <filesystem>
#include <string>
#include <string_view>

namespace sgg {

// Lowercase hex SHA-256.
std::string Sha256Hex(std::string_view data);
std::string Sha256File(const std::filesystem::path& path);  // throws IoError

}  // namespace sgg

#endif  // SGG_CHECKSUM_H_
