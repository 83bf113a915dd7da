// SPDX-License-Identifier: Apache-2.0
// CLI entry point; subcommands are wired up in cli.hpp.

#include <cstdio>

int main() {
  std::puts("placeholder");
  return 0;
}
