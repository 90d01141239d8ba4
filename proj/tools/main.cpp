// Copyright 2026 The ONG Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) { return ong::cli::run_main(argc, argv, std::cout, std::cerr); }
