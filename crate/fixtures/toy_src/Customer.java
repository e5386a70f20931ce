class Customer {
    String name;
    Address home;
    Account primary;
    int visits;

    Customer(String name, Address home) {
        this.name = name;
        this.home = home;
    }

    String label() {
        return name;
    }

    String city() {
        return home.getCity();
    }

    void open(Account a) {
        primary = a;
    }

    void visit() {
        visits = visits + 1;
    }

    double worth() {
        return primary.getBalance();
    }
}

class Address {
    String street;
    String city;

    Address(String street, String city) {
        this.street = street;
        this.city = city;
    }

    String getCity() {
        return city;
    }

    String getStreet() {
        return street;
    }
}
