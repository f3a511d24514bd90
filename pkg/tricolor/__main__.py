# === Tricolor - Entry Point ===
#
# HOW TO USE:
#    python -m tricolor gen --n 60 --degree 8 --seed 1 --out g.col
#    python -m tricolor color --in g.col --r 2 --seed 7 --report rep.json
#
# Run `python -m tricolor --help` for every subcommand.
from .tricolor_cli import main

if __name__ == "__main__":
    main()
