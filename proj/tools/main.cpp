#include "voromesh/cli.hpp"

int main(int argc, char** argv) {
    return voromesh::cli_dispatch({argv + 1, argv + argc});
}
