// SPDX-License-Identifier: Apache-2.0
// SPDX-FileCopyrightText: © 2026 The arsmart-sim Authors

#include "arsmart/cli.hpp"

int main(int argc, char **argv) { return arsmart::run_cli(argc, argv); }
