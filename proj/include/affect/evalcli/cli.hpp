/*
 * Copyright (c) 2026, The affect authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace affect::cli {

/**
 * Entry point of the affect command line. args excludes the program name.
 * Returns the process exit status; messages go to out and err.
 */
int run_pipeline(std::span<const std::string> args, std::ostream& out, std::ostream& err);

/// argv form used by main().
int run_pipeline(int argc, char** argv);

}  // namespace affect::cli
