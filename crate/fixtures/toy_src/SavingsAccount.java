class SavingsAccount extends Account {
    double rate;

    SavingsAccount(String name, double rate) {
        super(name);
        this.rate = rate;
    }

    void addInterest() {
        double interest = getBalance() * rate;
        deposit(interest);
    }
}
