#include "hysterion/cli.hpp"

int main(int argc, char** argv) {
  return hyst::cli_dispatch({argv + 1, argv + argc});
}
