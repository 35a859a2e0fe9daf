"""Entry point for ``python -m ncgames``."""
from .cli import console_entry

if __name__ == "__main__":
    console_entry()
