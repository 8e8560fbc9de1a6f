from subradius.cli import main_entry

main_entry()
