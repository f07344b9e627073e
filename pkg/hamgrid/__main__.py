import hamgrid.cli


def main():
    hamgrid.cli.run()


if __name__ == "__main__":
    main()
