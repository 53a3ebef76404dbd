// Copyright 2026 The dockscope Authors
// SPDX-License-Identifier: Apache-2.0

#include "dockscope_app/cli.hpp"

int main(int argc, char** argv) { return dockscope::app::main_entry(argc, argv); }
