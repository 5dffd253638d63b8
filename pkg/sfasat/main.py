from sfasat.commands import cli


def main():
    cli(prog_name="sfasat")


if __name__ == "__main__":
    main()
