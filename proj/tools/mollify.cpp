#include "mollify/cli.hpp"

int main(int argc, char** argv) {
    return mollify::cli::run(argc, argv);
}
